//! Vector fields for the benchmark systems.
//!
//! Each model is a Lipschitz field `x' = f(x, u)` together with its control
//! box and the non-position part of its state-constraint box. Position bounds
//! come from the environment's workspace (see [`crate::env::StateSpace`]).

mod double_integrator;
mod dubins;
mod quadcopter;

pub use double_integrator::DoubleIntegrator6D;
pub use dubins::DubinsAirplane6D;
pub use quadcopter::Quadcopter12D;

use crate::error::{Error, Result};
use crate::state::{ControlVec, StateVec};

/// How a state coordinate behaves for wrapping and distance weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimKind {
    Position,
    /// Linear or angular rate, or speed.
    Velocity,
    /// Bounded angle, never wrapped.
    Angle,
    /// Periodic angle kept in `(-pi, pi]`.
    WrappedAngle,
}

pub trait DynamicsModel: Sync {
    fn name(&self) -> &'static str;
    fn state_dim(&self) -> usize;
    fn control_dim(&self) -> usize;
    fn control_lo(&self) -> &[f64];
    fn control_hi(&self) -> &[f64];
    /// Lower state-constraint bounds. Position entries are ignored in favour
    /// of the workspace.
    fn state_lo(&self) -> &[f64];
    fn state_hi(&self) -> &[f64];
    fn dim_kind(&self, i: usize) -> DimKind;

    /// Indices of the x, y, z position coordinates.
    fn workspace_dims(&self) -> [usize; 3] {
        [0, 1, 2]
    }

    /// Writes `f(x, u)` into `out`. Slices already have the model's lengths.
    fn derivative_into(&self, x: &[f64], u: &[f64], out: &mut [f64]);

    /// A resting state at `position`, used when an environment only gives
    /// the start position.
    fn rest_state(&self, position: [f64; 3]) -> StateVec {
        let mut s = StateVec::zeros(self.state_dim());
        for (k, &d) in self.workspace_dims().iter().enumerate() {
            s[d] = position[k];
        }
        s
    }

    /// Puts periodic coordinates back into their canonical range.
    fn normalize(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            if self.dim_kind(i) == DimKind::WrappedAngle {
                *v = crate::state::wrap_angle(*v);
            }
        }
    }

    fn position(&self, x: &[f64]) -> [f64; 3] {
        let d = self.workspace_dims();
        [x[d[0]], x[d[1]], x[d[2]]]
    }
}

/// Checked evaluation of the vector field.
pub fn derivative<M: DynamicsModel + ?Sized>(
    model: &M,
    x: &StateVec,
    u: &ControlVec,
) -> Result<StateVec> {
    if x.dim() != model.state_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.state_dim(),
            got: x.dim(),
        });
    }
    if u.dim() != model.control_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.control_dim(),
            got: u.dim(),
        });
    }
    let mut out = StateVec::zeros(model.state_dim());
    model.derivative_into(x, u, &mut out);
    Ok(out)
}

/// The three benchmark systems, selectable by name.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    DoubleIntegrator(DoubleIntegrator6D),
    Dubins(DubinsAirplane6D),
    Quadcopter(Quadcopter12D),
}

impl Model {
    pub const NAMES: [&'static str; 3] = ["di6", "dubins6", "quad12"];

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "di6" => Some(Model::DoubleIntegrator(DoubleIntegrator6D::default())),
            "dubins6" => Some(Model::Dubins(DubinsAirplane6D::default())),
            "quad12" => Some(Model::Quadcopter(Quadcopter12D::default())),
            _ => None,
        }
    }

    /// Default maximum propagation time for the model.
    pub fn default_t_prop(&self) -> f64 {
        match self {
            Model::Quadcopter(_) => 0.5,
            _ => 1.0,
        }
    }

    /// Default grid resolution: 4 cells per dimension for the 6D systems,
    /// 3 for the quadcopter.
    pub fn default_cells_per_dim(&self) -> u32 {
        match self {
            Model::Quadcopter(_) => 3,
            _ => 4,
        }
    }

    fn inner(&self) -> &dyn DynamicsModel {
        match self {
            Model::DoubleIntegrator(m) => m,
            Model::Dubins(m) => m,
            Model::Quadcopter(m) => m,
        }
    }
}

impl DynamicsModel for Model {
    fn name(&self) -> &'static str {
        self.inner().name()
    }
    fn state_dim(&self) -> usize {
        self.inner().state_dim()
    }
    fn control_dim(&self) -> usize {
        self.inner().control_dim()
    }
    fn control_lo(&self) -> &[f64] {
        self.inner().control_lo()
    }
    fn control_hi(&self) -> &[f64] {
        self.inner().control_hi()
    }
    fn state_lo(&self) -> &[f64] {
        self.inner().state_lo()
    }
    fn state_hi(&self) -> &[f64] {
        self.inner().state_hi()
    }
    fn dim_kind(&self, i: usize) -> DimKind {
        self.inner().dim_kind(i)
    }
    fn workspace_dims(&self) -> [usize; 3] {
        self.inner().workspace_dims()
    }
    #[inline]
    fn derivative_into(&self, x: &[f64], u: &[f64], out: &mut [f64]) {
        match self {
            Model::DoubleIntegrator(m) => m.derivative_into(x, u, out),
            Model::Dubins(m) => m.derivative_into(x, u, out),
            Model::Quadcopter(m) => m.derivative_into(x, u, out),
        }
    }
    fn rest_state(&self, position: [f64; 3]) -> StateVec {
        self.inner().rest_state(position)
    }
    fn normalize(&self, x: &mut [f64]) {
        match self {
            Model::DoubleIntegrator(_) => {}
            Model::Dubins(m) => m.normalize(x),
            Model::Quadcopter(m) => m.normalize(x),
        }
    }
}
