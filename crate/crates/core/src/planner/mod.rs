//! Parallel tree expansion in three barrier-separated passes.
//!
//! Every iteration:
//!
//! 1. **propagate**: each expansion-set node is extended `lambda` times with a
//!    random control and duration. Valid extensions are staged when they land
//!    in an unvisited sub-region, or otherwise with the region's acceptance
//!    probability. Every outcome feeds the region counters.
//! 2. **estimates**: region metrics and acceptance probabilities are
//!    recomputed for all regions that hold a node.
//! 3. **node sets**: expansion nodes are retired to the open set with
//!    probability `1 - p_accept`, staged nodes join the tree (and the
//!    expansion set), and open nodes come back with probability `p_accept`.
//!
//! All randomness comes from counter-based streams keyed by
//! `(seed, iteration, slot, extension, phase)`, and staged nodes are
//! inserted in `(parent slot, extension)` order, so the tree is identical for
//! any number of workers.

mod arena;

pub use arena::{Node, NodeTag, SlotId, TreeArena, ROOT};

use alloc::vec;
use alloc::vec::Vec;

use crate::config::CheckedConfig;
use crate::decomposition::{Decomposition, RegionId};
use crate::dynamics::DynamicsModel;
use crate::env::{Environment, GoalBall};
use crate::error::{Error, Result};
use crate::exec::{Clock, Executor};
use crate::integrate::{default_substeps, sample_control, sample_duration};
use crate::result::{PlanResult, PlanStats, PlanStatus};
use crate::rng::{unit_f64, Phase, RngStream};
use crate::state::{ControlVec, StateVec};
use crate::validity::ValidityChecker;

/// `max(1, min(lambda_max, floor((t_e - tree_size) / ve_size)))`.
pub fn compute_branching_factor(t_e: usize, tree_size: usize, ve_size: usize, lambda_max: u32) -> u32 {
    let ve = ve_size.max(1);
    let room = t_e.saturating_sub(tree_size) / ve;
    (room.min(lambda_max as usize) as u32).max(1)
}

/// One attempted extension, valid or not.
#[derive(Debug, Clone, Copy)]
pub struct Extension {
    pub parent: SlotId,
    pub extension: u32,
    pub control: ControlVec,
    pub dt: f64,
    pub end_state: StateVec,
    pub region: RegionId,
    pub subregion: u32,
    pub valid: bool,
    /// Uniform draw compared against `p_accept` when the sub-region is
    /// already visited.
    pub accept_draw: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PropagateReport {
    pub attempted: usize,
    pub valid: usize,
    pub staged: usize,
    pub first_visits: usize,
}

/// What the node-set pass decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSetsOutcome {
    Continue,
    /// A staged node reached the goal; its slot is returned.
    Goal(SlotId),
    /// The arena is full and nothing more can be inserted.
    CapacityExhausted,
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationState {
    pub iteration: u64,
    pub lambda: u32,
    pub expand: usize,
    pub unexplored: usize,
    pub open: usize,
    pub tree_size: usize,
    pub elapsed_s: f64,
}

pub struct KinoPax<'a, M: DynamicsModel, E: Executor> {
    cfg: &'a CheckedConfig,
    model: &'a M,
    exec: &'a E,
    checker: ValidityChecker,
    goal: GoalBall,
    arena: TreeArena,
    decomposition: Decomposition,
    staged: Vec<Extension>,
    iteration: u64,
}

impl<'a, M: DynamicsModel, E: Executor> KinoPax<'a, M, E> {
    pub fn new(
        cfg: &'a CheckedConfig,
        env: &Environment,
        model: &'a M,
        exec: &'a E,
        check_resolution: f64,
    ) -> Result<Self> {
        env.validate()?;
        let checker = ValidityChecker::new(env, model, check_resolution)?;
        let start = env.start_state(model)?;
        if !checker.state_valid(&start) {
            return Err(Error::InvalidStart("start violates the state constraints".into()));
        }
        if cfg.cells.len() != model.state_dim() {
            return Err(Error::DimensionMismatch { expected: model.state_dim(), got: cfg.cells.len() });
        }
        let mut decomposition = Decomposition::new(
            checker.state_space(),
            &cfg.cells,
            cfg.subcells_per_dim,
            model.workspace_dims(),
            cfg.delta,
            cfg.epsilon,
        );
        let root_region = decomposition.region_index(&start);
        decomposition.mark_available(root_region);
        decomposition.try_mark_subregion_visited(root_region, decomposition.subregion_index(&start, root_region));
        Ok(Self {
            cfg,
            model,
            exec,
            checker,
            goal: env.goal,
            arena: TreeArena::new(cfg.t_e, start, root_region, model.control_dim()),
            decomposition,
            staged: Vec::new(),
            iteration: 0,
        })
    }

    pub fn arena(&self) -> &TreeArena {
        &self.arena
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn checker(&self) -> &ValidityChecker {
        &self.checker
    }

    pub fn staged(&self) -> &[Extension] {
        &self.staged
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn branching_factor(&self) -> u32 {
        compute_branching_factor(
            self.cfg.t_e,
            self.arena.len(),
            self.arena.count(NodeTag::Expand),
            self.cfg.lambda_max,
        )
    }

    /// Extends every expansion node `lambda` times. Returns every attempted
    /// extension in `(parent, extension)` order; the staged subset is kept
    /// for the node-set pass.
    pub fn propagate_pass(&mut self, lambda: u32) -> (PropagateReport, Vec<Extension>) {
        let lambda = lambda.max(1);
        let expand = self.arena.slots_with(NodeTag::Expand);
        let total = expand.len() * lambda as usize;
        let blank = Extension {
            parent: 0,
            extension: 0,
            control: ControlVec::zeros(self.model.control_dim()),
            dt: 0.0,
            end_state: StateVec::zeros(self.model.state_dim()),
            region: 0,
            subregion: 0,
            valid: false,
            accept_draw: 1.0,
        };
        let mut attempts = vec![blank; total];
        {
            let seed = self.cfg.seed;
            let iteration = self.iteration;
            let t_prop = self.cfg.t_prop;
            let model = self.model;
            let checker = &self.checker;
            let decomposition = &self.decomposition;
            let nodes = self.arena.nodes();
            let expand = &expand;
            self.exec.for_each_mut(&mut attempts, |k, out| {
                let slot = expand[k / lambda as usize];
                let j = (k % lambda as usize) as u32;
                let mut rng = RngStream::keyed(seed, iteration, slot, j, Phase::Sample);
                let control = sample_control(model, &mut rng);
                let dt = sample_duration(&mut rng, t_prop).unwrap_or(t_prop);
                let (end, valid) = propagate_checked(model, checker, &nodes[slot as usize].state, &control, dt);
                let region = decomposition.region_index(&end);
                decomposition.record_outcome(region, valid);
                *out = Extension {
                    parent: slot,
                    extension: j,
                    control,
                    dt,
                    end_state: end,
                    region,
                    subregion: decomposition.subregion_index(&end, region),
                    valid,
                    accept_draw: if valid {
                        unit_f64(&mut RngStream::keyed(seed, iteration, slot, j, Phase::Accept))
                    } else {
                        1.0
                    },
                };
            });
        }

        // First-visit claims are resolved in staging order so the winner of a
        // contested sub-region does not depend on scheduling.
        let mut report = PropagateReport { attempted: total, ..Default::default() };
        self.staged.clear();
        for ext in attempts.iter().filter(|e| e.valid) {
            report.valid += 1;
            let first = self.decomposition.try_mark_subregion_visited(ext.region, ext.subregion);
            if first {
                report.first_visits += 1;
            }
            if first || ext.accept_draw < self.decomposition.p_accept(ext.region) {
                self.staged.push(*ext);
            }
        }
        report.staged = self.staged.len();
        (report, attempts)
    }

    pub fn update_estimates_pass(&mut self) {
        self.decomposition.update_estimates(self.exec);
    }

    /// Retires, inserts and re-activates nodes, in that order.
    pub fn update_node_sets_pass(&mut self) -> NodeSetsOutcome {
        let seed = self.cfg.seed;
        let iteration = self.iteration;
        let decomposition = &self.decomposition;

        let (nodes, tags) = self.arena.nodes_and_tags_mut();
        self.exec.for_each_mut(tags, |slot, tag| {
            if *tag == NodeTag::Expand {
                let p = decomposition.p_accept(nodes[slot].region);
                let u = unit_f64(&mut RngStream::keyed(seed, iteration, slot as u32, 0, Phase::Demote));
                if u >= p {
                    *tag = NodeTag::Open;
                }
            }
        });

        let mut outcome = NodeSetsOutcome::Continue;
        let staged = core::mem::take(&mut self.staged);
        for ext in &staged {
            let node = Node {
                state: ext.end_state,
                parent: ext.parent,
                control: ext.control,
                dt: ext.dt,
                region: ext.region,
            };
            let Some(slot) = self.arena.push(node) else {
                break;
            };
            self.decomposition.mark_available(ext.region);
            if self.checker.in_goal(&ext.end_state, &self.goal) {
                outcome = NodeSetsOutcome::Goal(slot);
                break;
            }
        }
        self.staged = staged;
        self.staged.clear();
        if let NodeSetsOutcome::Goal(_) = outcome {
            return outcome;
        }

        let decomposition = &self.decomposition;
        let (nodes, tags) = self.arena.nodes_and_tags_mut();
        self.exec.for_each_mut(tags, |slot, tag| {
            if *tag == NodeTag::Open {
                let p = decomposition.p_accept(nodes[slot].region);
                let u = unit_f64(&mut RngStream::keyed(seed, iteration, slot as u32, 0, Phase::Promote));
                if u < p {
                    *tag = NodeTag::Expand;
                }
            }
        });

        if !self.arena.tags().contains(&NodeTag::Expand) {
            self.rescue_expansion_set();
        }

        if self.arena.is_full() {
            NodeSetsOutcome::CapacityExhausted
        } else {
            NodeSetsOutcome::Continue
        }
    }

    /// Promotes the open node with the highest acceptance probability, lowest
    /// slot on ties.
    fn rescue_expansion_set(&mut self) {
        let mut best: Option<(SlotId, f64)> = None;
        for (i, tag) in self.arena.tags().iter().enumerate() {
            if *tag == NodeTag::Open {
                let p = self.decomposition.p_accept(self.arena.nodes()[i].region);
                if best.is_none_or(|(_, bp)| p > bp) {
                    best = Some((i as SlotId, p));
                }
            }
        }
        if let Some((slot, _)) = best {
            self.arena.set_tag(slot, NodeTag::Expand);
        }
    }

    fn stats(&self, clock: &dyn Clock) -> PlanStats {
        PlanStats {
            iterations: self.iteration,
            tree_size: self.arena.len(),
            wall_time_ms: clock.elapsed_secs() * 1e3,
            solution_duration_s: 0.0,
        }
    }

    /// Runs iterations until the goal is reached, the time budget runs out,
    /// or the arena fills up.
    pub fn run(&mut self, clock: &dyn Clock, trace: &mut dyn FnMut(&IterationState)) -> PlanResult {
        if self.checker.in_goal(&self.arena.node(0).state, &self.goal) {
            return PlanResult {
                status: PlanStatus::Solved,
                trajectory: Vec::new(),
                stats: self.stats(clock),
            };
        }
        loop {
            let elapsed = clock.elapsed_secs();
            if elapsed >= self.cfg.t_max || clock.cancelled() {
                return PlanResult::unsolved(PlanStatus::Timeout, self.stats(clock));
            }
            let lambda = self.branching_factor();
            let expand = self.arena.count(NodeTag::Expand);
            let (report, _) = self.propagate_pass(lambda);
            trace(&IterationState {
                iteration: self.iteration,
                lambda,
                expand,
                unexplored: report.staged,
                open: self.arena.len() - expand,
                tree_size: self.arena.len(),
                elapsed_s: elapsed,
            });
            self.update_estimates_pass();
            let outcome = self.update_node_sets_pass();
            self.iteration += 1;
            match outcome {
                NodeSetsOutcome::Continue => {}
                NodeSetsOutcome::Goal(slot) => {
                    let mut stats = self.stats(clock);
                    return match self.arena.extract_trajectory(self.model, slot) {
                        Ok(trajectory) => {
                            stats.solution_duration_s = trajectory.iter().map(|s| s.dt).sum();
                            PlanResult { status: PlanStatus::Solved, trajectory, stats }
                        }
                        Err(_) => PlanResult::unsolved(PlanStatus::Error, stats),
                    };
                }
                NodeSetsOutcome::CapacityExhausted => {
                    return PlanResult::unsolved(PlanStatus::CapacityExhausted, self.stats(clock));
                }
            }
        }
    }
}

/// Integrates the full segment and reports whether every chord was valid.
/// Returns the last finite state reached.
#[inline]
fn propagate_checked<M: DynamicsModel + ?Sized>(
    model: &M,
    checker: &ValidityChecker,
    start: &StateVec,
    control: &ControlVec,
    dt: f64,
) -> (StateVec, bool) {
    let mut valid = true;
    let mut last = *start;
    let end = crate::integrate::integrate_visit(model, start, control, dt, default_substeps(dt), |prev, next| {
        last = *next;
        if valid && !checker.chord_valid(prev, next) {
            valid = false;
        }
        true
    });
    match end {
        Some(x) => (x, valid),
        None => (last, false),
    }
}

/// Plans one query with a fresh tree.
pub fn plan<M: DynamicsModel, E: Executor>(
    cfg: &CheckedConfig,
    env: &Environment,
    model: &M,
    exec: &E,
    clock: &dyn Clock,
    check_resolution: f64,
    trace: &mut dyn FnMut(&IterationState),
) -> Result<PlanResult> {
    let mut planner = KinoPax::new(cfg, env, model, exec, check_resolution)?;
    Ok(planner.run(clock, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branching_factor_cases() {
        assert_eq!(compute_branching_factor(200_000, 1, 1, 32), 32);
        assert_eq!(compute_branching_factor(10, 4, 3, 32), 2);
        assert_eq!(compute_branching_factor(100, 100, 10, 32), 1);
    }

    proptest::proptest! {
        #[test]
        fn branching_factor_bounds(t_e in 1usize..1_000_000, used in 0usize..1_000_000, ve in 1usize..100_000, lmax in 1u32..64) {
            let tree = used.min(t_e);
            let l = compute_branching_factor(t_e, tree, ve, lmax);
            proptest::prop_assert!(l >= 1 && l <= lmax);
            if l > 1 {
                proptest::prop_assert!(tree + ve * l as usize <= t_e);
            }
        }
    }
}
