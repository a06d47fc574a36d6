//! Serial kinodynamic RRT used as the comparison baseline.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::CheckedConfig;
use crate::dynamics::{DimKind, DynamicsModel};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::exec::Clock;
use crate::integrate::{default_substeps, integrate_visit, propagate_ode, sample_control, sample_duration, TrajectorySegment};
use crate::result::{PlanResult, PlanStats, PlanStatus};
use crate::rng::{unit_f64, RngStream};
use crate::state::{wrap_angle, ControlVec, StateVec};
use crate::validity::ValidityChecker;

pub const GOAL_BIAS: f64 = 0.05;
pub const POSITION_WEIGHT: f64 = 1.0;
pub const VELOCITY_WEIGHT: f64 = 0.1;
pub const ANGLE_WEIGHT: f64 = 0.3;

/// `sqrt(sum(w_i * d_i^2))` with per-kind weights; wrapped angles use the
/// shortest angular difference.
pub fn weighted_distance<M: DynamicsModel + ?Sized>(model: &M, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let (w, d) = match model.dim_kind(i) {
            DimKind::Position => (POSITION_WEIGHT, a[i] - b[i]),
            DimKind::Velocity => (VELOCITY_WEIGHT, a[i] - b[i]),
            DimKind::Angle => (ANGLE_WEIGHT, a[i] - b[i]),
            DimKind::WrappedAngle => (ANGLE_WEIGHT, wrap_angle(a[i] - b[i])),
        };
        acc += w * d * d;
    }
    libm::sqrt(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrtNode {
    pub state: StateVec,
    pub parent: usize,
    pub control: ControlVec,
    pub dt: f64,
}

#[derive(Debug, Clone, Default)]
pub struct RrtTree {
    pub nodes: Vec<RrtNode>,
}

impl RrtTree {
    pub fn with_root(root: StateVec, control_dim: usize) -> Self {
        Self { nodes: vec![RrtNode { state: root, parent: usize::MAX, control: ControlVec::zeros(control_dim), dt: 0.0 }] }
    }

    /// Index of the closest node; lowest index wins ties.
    pub fn nearest<M: DynamicsModel + ?Sized>(&self, model: &M, x: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, n) in self.nodes.iter().enumerate() {
            let d = weighted_distance(model, &n.state, x);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    pub fn extract_trajectory<M: DynamicsModel + ?Sized>(
        &self,
        model: &M,
        index: usize,
    ) -> Result<Vec<TrajectorySegment>> {
        let mut chain = Vec::new();
        let mut cur = index;
        while cur != 0 {
            let p = self.nodes[cur].parent;
            if p >= cur {
                return Err(Error::CorruptTree(format!("rrt node {cur} has parent {p}")));
            }
            chain.push(cur);
            cur = p;
        }
        chain.reverse();
        chain
            .into_iter()
            .map(|i| {
                let n = &self.nodes[i];
                propagate_ode(model, &self.nodes[n.parent].state, &n.control, n.dt, default_substeps(n.dt))
            })
            .collect()
    }
}

/// Grows a kinodynamic RRT with one random control per iteration until the
/// goal is reached, the clock runs out, or `t_e` nodes exist.
pub fn rrt_plan<M: DynamicsModel>(
    cfg: &CheckedConfig,
    env: &Environment,
    model: &M,
    clock: &dyn Clock,
    check_resolution: f64,
    seed: u64,
) -> Result<PlanResult> {
    env.validate()?;
    let checker = ValidityChecker::new(env, model, check_resolution)?;
    let start = env.start_state(model)?;
    if !checker.state_valid(&start) {
        return Err(Error::InvalidStart("start violates the state constraints".into()));
    }
    let mut tree = RrtTree::with_root(start, model.control_dim());
    let mut rng = RngStream::sequential(seed);
    let mut iterations = 0u64;
    let stats = |tree: &RrtTree, iterations: u64| PlanStats {
        iterations,
        tree_size: tree.nodes.len(),
        wall_time_ms: clock.elapsed_secs() * 1e3,
        solution_duration_s: 0.0,
    };
    if checker.in_goal(&start, &env.goal) {
        return Ok(PlanResult { status: PlanStatus::Solved, trajectory: Vec::new(), stats: stats(&tree, 0) });
    }
    let space = checker.state_space().clone();
    let pos_dims = model.workspace_dims();
    loop {
        if clock.elapsed_secs() >= cfg.t_max || clock.cancelled() {
            return Ok(PlanResult::unsolved(PlanStatus::Timeout, stats(&tree, iterations)));
        }
        if tree.nodes.len() >= cfg.t_e {
            return Ok(PlanResult::unsolved(PlanStatus::CapacityExhausted, stats(&tree, iterations)));
        }
        iterations += 1;

        let mut target = StateVec::zeros(model.state_dim());
        for d in 0..target.dim() {
            target[d] = space.lo[d] + unit_f64(&mut rng) * (space.hi[d] - space.lo[d]);
        }
        if unit_f64(&mut rng) < GOAL_BIAS {
            for (k, &d) in pos_dims.iter().enumerate() {
                target[d] = env.goal.center[k];
            }
        }
        let near = tree.nearest(model, &target);
        let control = sample_control(model, &mut rng);
        let dt = sample_duration(&mut rng, cfg.t_prop)?;
        let from = tree.nodes[near].state;
        let mut valid = true;
        let end = integrate_visit(model, &from, &control, dt, default_substeps(dt), |a, b| {
            valid = checker.chord_valid(a, b);
            valid
        });
        let Some(end) = end else { continue };
        if !valid {
            continue;
        }
        tree.nodes.push(RrtNode { state: end, parent: near, control, dt });
        if checker.in_goal(&end, &env.goal) {
            let idx = tree.nodes.len() - 1;
            let mut s = stats(&tree, iterations);
            return Ok(match tree.extract_trajectory(model, idx) {
                Ok(trajectory) => {
                    s.solution_duration_s = trajectory.iter().map(|t| t.dt).sum();
                    PlanResult { status: PlanStatus::Solved, trajectory, stats: s }
                }
                Err(_) => PlanResult::unsolved(PlanStatus::Error, s),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{DoubleIntegrator6D, DubinsAirplane6D};

    fn tree_of(states: &[[f64; 6]]) -> RrtTree {
        let mut t = RrtTree::with_root(StateVec::from_slice(&states[0]), 3);
        for s in &states[1..] {
            t.nodes.push(RrtNode { state: StateVec::from_slice(s), parent: 0, control: ControlVec::zeros(3), dt: 0.1 });
        }
        t
    }

    #[test]
    fn single_node_is_nearest() {
        let m = DoubleIntegrator6D::default();
        let t = tree_of(&[[1.0; 6]]);
        assert_eq!(t.nearest(&m, &[9.0; 6]), 0);
    }

    #[test]
    fn exact_match_wins() {
        let m = DoubleIntegrator6D::default();
        let t = tree_of(&[[0.0; 6], [1.0; 6], [2.0; 6]]);
        assert_eq!(t.nearest(&m, &[1.0; 6]), 1);
    }

    #[test]
    fn line_query_near_middle() {
        // Nodes at x = 0, 2, 4; query at x = 2.4 with a velocity offset that
        // costs 0.1 * 1^2 against every node alike.
        let m = DoubleIntegrator6D::default();
        let t = tree_of(&[
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [4.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ]);
        let q = [2.4, 0.0, 0.0, 1.0, 0.0, 0.0];
        // Squared distances: 5.76 + 0.1, 0.16 + 0.1, 2.56 + 0.1.
        assert!((weighted_distance(&m, &t.nodes[1].state, &q) - libm::sqrt(0.26)).abs() < 1e-12);
        assert_eq!(t.nearest(&m, &q), 1);
    }

    #[test]
    fn heading_difference_wraps() {
        use core::f64::consts::PI;
        let m = DubinsAirplane6D::default();
        let a = [0.0, 0.0, 0.0, 1.0, PI - 0.05, 0.0];
        let b = [0.0, 0.0, 0.0, 1.0, -PI + 0.05, 0.0];
        let d = weighted_distance(&m, &a, &b);
        assert!((d - libm::sqrt(0.3 * 0.01)).abs() < 1e-9);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let m = DoubleIntegrator6D::default();
        let t = tree_of(&[[0.0; 6], [2.0, 0.0, 0.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0, 0.0, 0.0]]);
        assert_eq!(t.nearest(&m, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]), 0);
    }

    proptest::proptest! {
        #[test]
        fn nearest_matches_brute_force(
            pts in proptest::collection::vec(proptest::array::uniform6(-5.0f64..5.0), 1..40),
            q in proptest::array::uniform6(-5.0f64..5.0),
        ) {
            let m = DubinsAirplane6D::default();
            let t = tree_of(&pts);
            let got = t.nearest(&m, &q);
            let best = pts
                .iter()
                .map(|p| weighted_distance(&m, p, &q))
                .fold(f64::INFINITY, f64::min);
            proptest::prop_assert_eq!(weighted_distance(&m, &pts[got], &q), best);
            let first = pts.iter().position(|p| weighted_distance(&m, p, &q) == best).unwrap();
            proptest::prop_assert_eq!(got, first);
        }
    }
}
