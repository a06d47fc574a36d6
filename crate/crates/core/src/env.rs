//! Workspace geometry and the planning query.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::DynamicsModel;
use crate::error::{Error, Result};
use crate::state::StateVec;

/// Closed axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        Self { min, max }
    }

    #[inline]
    pub fn contains(&self, p: &[f64; 3]) -> bool {
        (0..3).all(|k| p[k] >= self.min[k] && p[k] <= self.max[k])
    }

    /// Whether the closed segment `a -> b` touches the closed box.
    ///
    /// Slab test; exact up to floating point.
    pub fn intersects_segment(&self, a: &[f64; 3], b: &[f64; 3]) -> bool {
        let mut t0 = 0.0f64;
        let mut t1 = 1.0f64;
        for k in 0..3 {
            let d = b[k] - a[k];
            if d == 0.0 {
                if a[k] < self.min[k] || a[k] > self.max[k] {
                    return false;
                }
                continue;
            }
            let inv = 1.0 / d;
            let mut lo = (self.min[k] - a[k]) * inv;
            let mut hi = (self.max[k] - a[k]) * inv;
            if lo > hi {
                core::mem::swap(&mut lo, &mut hi);
            }
            t0 = t0.max(lo);
            t1 = t1.min(hi);
            if t0 > t1 {
                return false;
            }
        }
        true
    }

    pub fn is_well_formed(&self) -> bool {
        (0..3).all(|k| self.min[k].is_finite() && self.max[k].is_finite() && self.min[k] <= self.max[k])
    }
}

/// Closed ball on the workspace position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalBall {
    pub center: [f64; 3],
    pub radius: f64,
}

impl GoalBall {
    #[inline]
    pub fn contains(&self, p: &[f64; 3]) -> bool {
        let d2: f64 = (0..3).map(|k| (p[k] - self.center[k]) * (p[k] - self.center[k])).sum();
        libm::sqrt(d2) <= self.radius
    }
}

/// Optional override for the state-constraint box.
#[derive(Debug, Clone, PartialEq)]
pub struct StateBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub name: String,
    pub workspace: Aabb,
    pub state_bounds: Option<StateBounds>,
    pub obstacles: Vec<Aabb>,
    /// Either a full state or just a position; a position is completed with
    /// the model's rest state.
    pub start: Vec<f64>,
    pub goal: GoalBall,
}

impl Environment {
    /// Model-independent geometry checks.
    pub fn validate(&self) -> Result<()> {
        let ws = &self.workspace;
        if !ws.is_well_formed() || (0..3).any(|k| ws.min[k] >= ws.max[k]) {
            return Err(Error::Environment(format!(
                "workspace lo {:?} must be strictly below hi {:?}",
                ws.min, ws.max
            )));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            if !o.is_well_formed() {
                return Err(Error::Environment(format!(
                    "obstacle {i} has min {:?} above max {:?}",
                    o.min, o.max
                )));
            }
            if (0..3).any(|k| o.min[k] < ws.min[k] || o.max[k] > ws.max[k]) {
                return Err(Error::Environment(format!(
                    "obstacle {i} is not contained in the workspace"
                )));
            }
        }
        let g = &self.goal;
        if !(g.radius > 0.0) || !g.radius.is_finite() || g.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Environment(format!(
                "goal radius must be positive, got {}",
                g.radius
            )));
        }
        // Distance from goal center to the workspace box.
        let d2: f64 = (0..3)
            .map(|k| {
                let c = g.center[k].clamp(ws.min[k], ws.max[k]);
                (c - g.center[k]) * (c - g.center[k])
            })
            .sum();
        if libm::sqrt(d2) > g.radius {
            return Err(Error::Environment("goal ball does not meet the workspace".into()));
        }
        if self.start.len() < 3 || self.start.iter().any(|v| !v.is_finite()) {
            return Err(Error::Environment("start must have at least 3 finite values".into()));
        }
        let p = [self.start[0], self.start[1], self.start[2]];
        if !ws.contains(&p) {
            return Err(Error::InvalidStart("start position lies outside the workspace".into()));
        }
        if let Some(i) = self.obstacles.iter().position(|o| o.contains(&p)) {
            return Err(Error::InvalidStart(format!("start position collides with obstacle {i}")));
        }
        if let Some(b) = &self.state_bounds {
            if b.lo.len() != b.hi.len() || b.lo.iter().zip(&b.hi).any(|(l, h)| !(l <= h)) {
                return Err(Error::Environment("state_bounds lo/hi malformed".into()));
            }
        }
        Ok(())
    }

    /// Start state for `model`.
    pub fn start_state<M: DynamicsModel + ?Sized>(&self, model: &M) -> Result<StateVec> {
        let n = model.state_dim();
        match self.start.len() {
            3 => Ok(model.rest_state([self.start[0], self.start[1], self.start[2]])),
            len if len == n => {
                let mut s = StateVec::from_slice(&self.start);
                model.normalize(&mut s);
                Ok(s)
            }
            len => Err(Error::DimensionMismatch { expected: n, got: len }),
        }
    }
}

/// Full state box: model constraints with position rows replaced by the
/// workspace, optionally overridden by the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub lo: StateVec,
    pub hi: StateVec,
}

impl StateSpace {
    pub fn new<M: DynamicsModel + ?Sized>(env: &Environment, model: &M) -> Result<Self> {
        let n = model.state_dim();
        let mut lo = StateVec::from_slice(model.state_lo());
        let mut hi = StateVec::from_slice(model.state_hi());
        for (k, &d) in model.workspace_dims().iter().enumerate() {
            lo[d] = env.workspace.min[k];
            hi[d] = env.workspace.max[k];
        }
        if let Some(b) = &env.state_bounds {
            if b.lo.len() != n || b.hi.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: b.lo.len() });
            }
            lo = StateVec::from_slice(&b.lo);
            hi = StateVec::from_slice(&b.hi);
        }
        if lo.iter().chain(hi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Environment("state box must be finite in every dimension".into()));
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(self.hi.iter()))
            .all(|(v, (l, h))| *v >= *l && *v <= *h)
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_env() -> Environment {
        Environment {
            name: "unit".into(),
            workspace: Aabb::new([0.0; 3], [1.0; 3]),
            state_bounds: None,
            obstacles: vec![],
            start: vec![0.1, 0.1, 0.1],
            goal: GoalBall { center: [0.9; 3], radius: 0.05 },
        }
    }

    #[test]
    fn empty_environment_validates() {
        assert!(unit_env().validate().is_ok());
    }

    #[test]
    fn inverted_obstacle_rejected() {
        let mut e = unit_env();
        e.workspace = Aabb::new([0.0; 3], [4.0; 3]);
        e.obstacles.push(Aabb::new([2.0; 3], [1.0; 3]));
        assert!(matches!(e.validate(), Err(Error::Environment(_))));
    }

    #[test]
    fn start_in_obstacle_rejected() {
        let mut e = unit_env();
        e.obstacles.push(Aabb::new([0.0; 3], [0.2; 3]));
        assert!(matches!(e.validate(), Err(Error::InvalidStart(_))));
    }

    #[test]
    fn goal_outside_workspace_rejected() {
        let mut e = unit_env();
        e.goal.center = [3.0, 0.5, 0.5];
        assert!(e.validate().is_err());
    }

    #[test]
    fn segment_box_contact_counts() {
        let b = Aabb::new([1.0; 3], [2.0; 3]);
        assert!(b.intersects_segment(&[0.0, 1.5, 1.5], &[3.0, 1.5, 1.5]));
        // Grazes the face exactly.
        assert!(b.intersects_segment(&[0.0, 1.0, 1.5], &[3.0, 1.0, 1.5]));
        assert!(!b.intersects_segment(&[0.0, 0.99, 1.5], &[3.0, 0.99, 1.5]));
        assert!(!b.intersects_segment(&[0.0, 0.0, 0.0], &[0.9, 0.9, 0.9]));
        assert!(b.intersects_segment(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]));
    }

    proptest::proptest! {
        // Every sample point along the segment that lies in the box implies a hit.
        #[test]
        fn slab_test_never_misses_a_sampled_hit(
            a in proptest::array::uniform3(-1.0f64..4.0),
            b in proptest::array::uniform3(-1.0f64..4.0),
        ) {
            let bx = Aabb::new([1.0, 0.5, 1.2], [2.0, 2.5, 1.8]);
            let sampled = (0..=200).any(|i| {
                let t = i as f64 / 200.0;
                let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])];
                bx.contains(&p)
            });
            if sampled {
                proptest::prop_assert!(bx.intersects_segment(&a, &b));
            }
        }
    }
}
