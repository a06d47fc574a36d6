//! State-constraint and collision checks.
//!
//! The robot is a point at its workspace projection. Obstacles are closed
//! boxes, so touching a face is a collision. A segment is checked along the
//! polyline through its RK4 substep states: every chord is densified until
//! consecutive checked positions are at most `check_resolution` apart, and
//! each chord is additionally tested against every obstacle with an exact
//! slab test so nothing slips between two checked samples.

use alloc::vec::Vec;

use crate::dynamics::DynamicsModel;
use crate::env::{Aabb, Environment, GoalBall, StateSpace};
use crate::error::{Error, Result};
use crate::integrate::TrajectorySegment;
use crate::state::StateVec;

pub const DEFAULT_CHECK_RESOLUTION: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct ValidityChecker {
    space: StateSpace,
    workspace: Aabb,
    obstacles: Vec<Aabb>,
    position_dims: [usize; 3],
    check_resolution: f64,
}

impl ValidityChecker {
    pub fn new<M: DynamicsModel + ?Sized>(
        env: &Environment,
        model: &M,
        check_resolution: f64,
    ) -> Result<Self> {
        if !(check_resolution > 0.0) || !check_resolution.is_finite() {
            return Err(Error::Environment(alloc::format!(
                "check resolution must be positive, got {check_resolution}"
            )));
        }
        Ok(Self {
            space: StateSpace::new(env, model)?,
            workspace: env.workspace,
            obstacles: env.obstacles.clone(),
            position_dims: model.workspace_dims(),
            check_resolution,
        })
    }

    pub fn check_resolution(&self) -> f64 {
        self.check_resolution
    }

    pub fn state_space(&self) -> &StateSpace {
        &self.space
    }

    #[inline]
    pub fn position(&self, x: &[f64]) -> [f64; 3] {
        let d = self.position_dims;
        [x[d[0]], x[d[1]], x[d[2]]]
    }

    /// In the state box, inside the workspace, and outside every obstacle.
    #[inline]
    pub fn state_valid(&self, x: &[f64]) -> bool {
        if x.len() != self.space.dim() || !self.space.contains(x) {
            return false;
        }
        let p = self.position(x);
        self.workspace.contains(&p) && !self.obstacles.iter().any(|o| o.contains(&p))
    }

    /// Checks the chord `a -> b`, assuming `a` itself was already checked.
    #[inline]
    pub fn chord_valid(&self, a: &StateVec, b: &StateVec) -> bool {
        if !self.state_valid(b) {
            return false;
        }
        let pa = self.position(a);
        let pb = self.position(b);
        let len = libm::sqrt((0..3).map(|k| (pb[k] - pa[k]) * (pb[k] - pa[k])).sum::<f64>());
        // Power-of-two subdivision keeps the checked points nested when the
        // resolution shrinks.
        let mut pieces = 1usize;
        while len / pieces as f64 > self.check_resolution {
            pieces *= 2;
        }
        if pieces > 1 {
            let mut mid = *a;
            for i in 1..pieces {
                let t = i as f64 / pieces as f64;
                for d in 0..mid.dim() {
                    mid[d] = a[d] + t * (b[d] - a[d]);
                }
                if !self.state_valid(&mid) {
                    return false;
                }
            }
        }
        !self.obstacles.iter().any(|o| o.intersects_segment(&pa, &pb))
    }

    pub fn segment_valid(&self, seg: &TrajectorySegment) -> bool {
        if seg.sampled_states.is_empty() || !self.state_valid(&seg.start) {
            return false;
        }
        let mut prev = &seg.start;
        for s in &seg.sampled_states {
            if !self.chord_valid(prev, s) {
                return false;
            }
            prev = s;
        }
        true
    }

    pub fn in_goal(&self, x: &[f64], goal: &GoalBall) -> bool {
        goal.contains(&self.position(x))
    }
}

/// Closed-ball membership of the workspace projection.
pub fn in_goal<M: DynamicsModel + ?Sized>(model: &M, x: &[f64], goal: &GoalBall) -> bool {
    goal.contains(&model.position(x))
}
