//! Independent re-validation of solution trajectories.
//!
//! Shares no checking code with the planner: bounds are rebuilt from the model
//! and environment, and every chord between recorded substates is walked in
//! uniform steps ten times finer than the planner's check resolution.

use kinopax_core::dynamics::DynamicsModel;
use kinopax_core::env::Environment;
use kinopax_core::integrate::TrajectorySegment;

/// How much finer than the planner's resolution the audit samples.
pub const REFINEMENT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { point: usize },
    OutsideWorkspace { point: usize },
    StateBound { point: usize, dim: usize },
    Collision { point: usize, obstacle: usize },
    StartMismatch,
    Discontinuity { segment: usize },
    GoalMissed,
}

struct Limits {
    lo: Vec<f64>,
    hi: Vec<f64>,
    pos: [usize; 3],
}

fn limits<M: DynamicsModel + ?Sized>(env: &Environment, model: &M) -> Limits {
    let mut lo = model.state_lo().to_vec();
    let mut hi = model.state_hi().to_vec();
    if let Some(b) = &env.state_bounds {
        lo.clone_from(&b.lo);
        hi.clone_from(&b.hi);
    }
    let pos = model.workspace_dims();
    for k in 0..3 {
        lo[pos[k]] = env.workspace.min[k];
        hi[pos[k]] = env.workspace.max[k];
    }
    Limits { lo, hi, pos }
}

fn check_point(env: &Environment, lim: &Limits, x: &[f64], point: usize, out: &mut Vec<Violation>) {
    if x.iter().any(|v| !v.is_finite()) {
        out.push(Violation::NonFinite { point });
        return;
    }
    let p = [x[lim.pos[0]], x[lim.pos[1]], x[lim.pos[2]]];
    let inside = |min: &[f64; 3], max: &[f64; 3]| (0..3).all(|k| p[k] >= min[k] && p[k] <= max[k]);
    if !inside(&env.workspace.min, &env.workspace.max) {
        out.push(Violation::OutsideWorkspace { point });
    }
    for d in 0..x.len() {
        if !lim.pos.contains(&d) && (x[d] < lim.lo[d] || x[d] > lim.hi[d]) {
            out.push(Violation::StateBound { point, dim: d });
        }
    }
    for (i, o) in env.obstacles.iter().enumerate() {
        if inside(&o.min, &o.max) {
            out.push(Violation::Collision { point, obstacle: i });
        }
    }
}

/// Checks the polyline through `states`, sampling every chord at spacing no
/// larger than `step` in the workspace.
pub fn audit_polyline<M: DynamicsModel + ?Sized>(
    env: &Environment,
    model: &M,
    states: &[Vec<f64>],
    step: f64,
) -> Vec<Violation> {
    let lim = limits(env, model);
    let mut out = Vec::new();
    let mut point = 0;
    let Some(first) = states.first() else { return out };
    check_point(env, &lim, first, point, &mut out);
    let mut x = first.clone();
    for w in states.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let dist = (0..3)
            .map(|k| {
                let d = b[lim.pos[k]] - a[lim.pos[k]];
                d * d
            })
            .sum::<f64>()
            .sqrt();
        let n = ((dist / step).ceil() as usize).max(1);
        for i in 1..=n {
            let t = i as f64 / n as f64;
            for d in 0..x.len() {
                x[d] = a[d] + t * (b[d] - a[d]);
            }
            point += 1;
            check_point(env, &lim, &x, point, &mut out);
        }
    }
    out
}

/// Full audit of a planner result: start, continuity, goal, and every chord.
pub fn audit_trajectory<M: DynamicsModel + ?Sized>(
    env: &Environment,
    model: &M,
    segments: &[TrajectorySegment],
    check_resolution: f64,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let start: Vec<f64> = match env.start_state(model) {
        Ok(s) => s.as_slice().to_vec(),
        Err(_) => {
            out.push(Violation::StartMismatch);
            return out;
        }
    };
    let mut states = vec![start.clone()];
    let mut prev_end = start;
    for (i, seg) in segments.iter().enumerate() {
        if seg.start.as_slice() != prev_end.as_slice() {
            if i == 0 {
                out.push(Violation::StartMismatch);
            } else {
                out.push(Violation::Discontinuity { segment: i });
            }
        }
        if seg.sampled_states.last().map(|s| s.as_slice()) != Some(seg.end_state.as_slice()) {
            out.push(Violation::Discontinuity { segment: i });
        }
        states.extend(seg.sampled_states.iter().map(|s| s.as_slice().to_vec()));
        prev_end = seg.end_state.as_slice().to_vec();
    }
    let p = model.workspace_dims();
    let g = &env.goal;
    let d2: f64 = (0..3).map(|k| (prev_end[p[k]] - g.center[k]).powi(2)).sum();
    if d2 > g.radius * g.radius {
        out.push(Violation::GoalMissed);
    }
    out.extend(audit_polyline(env, model, &states, check_resolution / REFINEMENT));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kinopax_core::dynamics::DoubleIntegrator6D;
    use kinopax_core::env::{Aabb, GoalBall};

    fn env(obstacles: Vec<Aabb>) -> Environment {
        Environment {
            name: "t".into(),
            workspace: Aabb::new([0.0; 3], [10.0; 3]),
            state_bounds: None,
            obstacles,
            start: vec![1.0, 5.0, 5.0],
            goal: GoalBall { center: [9.0, 5.0, 5.0], radius: 0.5 },
        }
    }

    fn st(x: f64) -> Vec<f64> {
        vec![x, 5.0, 5.0, 0.0, 0.0, 0.0]
    }

    #[test]
    fn thin_wall_between_samples_is_found() {
        let e = env(vec![Aabb::new([5.0, 0.0, 0.0], [5.001, 10.0, 10.0])]);
        let v = audit_polyline(&e, &DoubleIntegrator6D::default(), &[st(4.0), st(6.0)], 0.0005);
        assert!(v.iter().any(|v| matches!(v, Violation::Collision { .. })));
    }

    #[test]
    fn free_line_is_clean() {
        let e = env(vec![]);
        assert!(audit_polyline(&e, &DoubleIntegrator6D::default(), &[st(1.0), st(9.0)], 0.01).is_empty());
    }

    #[test]
    fn velocity_bound_is_enforced() {
        let e = env(vec![]);
        let mut fast = st(2.0);
        fast[3] = 7.0;
        let v = audit_polyline(&e, &DoubleIntegrator6D::default(), &[st(1.0), fast], 0.1);
        assert!(v.iter().any(|v| matches!(v, Violation::StateBound { dim: 3, .. })));
    }

    #[test]
    fn empty_trajectory_outside_goal_misses() {
        let e = env(vec![]);
        let v = audit_trajectory(&e, &DoubleIntegrator6D::default(), &[], 0.05);
        assert_eq!(v, vec![Violation::GoalMissed]);
    }
}
