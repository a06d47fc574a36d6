//! Fixed-step RK4 propagation under a zero-order-hold control, and the
//! control/duration samplers used by every planner.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::dynamics::DynamicsModel;
use crate::error::{Error, Result};
use crate::rng::unit_f64;
use crate::state::{ControlVec, StateVec};

/// Target substep length in seconds.
pub const SUBSTEP_SECONDS: f64 = 0.02;
pub const MIN_SUBSTEPS: usize = 4;

/// A control held constant for `dt` seconds from `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySegment {
    pub start: StateVec,
    pub control: ControlVec,
    pub dt: f64,
    pub end_state: StateVec,
    /// Endpoint of every RK4 substep; the last entry equals `end_state`.
    pub sampled_states: Vec<StateVec>,
}

/// `ceil(dt / 0.02)`, at least 4.
pub fn default_substeps(dt: f64) -> usize {
    let n = libm::ceil(dt / SUBSTEP_SECONDS);
    if n.is_finite() && n > MIN_SUBSTEPS as f64 {
        n as usize
    } else {
        MIN_SUBSTEPS
    }
}

#[inline]
fn rk4_step<M: DynamicsModel + ?Sized>(model: &M, x: &mut StateVec, u: &[f64], h: f64) {
    let n = x.dim();
    let mut k1 = StateVec::zeros(n);
    let mut k2 = StateVec::zeros(n);
    let mut k3 = StateVec::zeros(n);
    let mut k4 = StateVec::zeros(n);
    let mut tmp = *x;

    model.derivative_into(x, u, &mut k1);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k1[i];
    }
    model.derivative_into(&tmp, u, &mut k2);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k2[i];
    }
    model.derivative_into(&tmp, u, &mut k3);
    for i in 0..n {
        tmp[i] = x[i] + h * k3[i];
    }
    model.derivative_into(&tmp, u, &mut k4);
    for i in 0..n {
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    model.normalize(x);
}

/// Integrates without allocating, handing each chord `(previous, next)` to
/// `visit`. Stops early and returns `None` when `visit` rejects a chord or a
/// state turns non-finite; otherwise returns the end state.
#[inline]
pub fn integrate_visit<M, F>(
    model: &M,
    start: &StateVec,
    control: &ControlVec,
    dt: f64,
    substeps: usize,
    mut visit: F,
) -> Option<StateVec>
where
    M: DynamicsModel + ?Sized,
    F: FnMut(&StateVec, &StateVec) -> bool,
{
    let h = dt / substeps as f64;
    let mut x = *start;
    for _ in 0..substeps {
        let prev = x;
        rk4_step(model, &mut x, control, h);
        if !x.is_finite() || !visit(&prev, &x) {
            return None;
        }
    }
    Some(x)
}

/// Propagates `x` under `u` for `dt` seconds using `substeps` equal RK4
/// steps and records every substep endpoint.
pub fn propagate_ode<M: DynamicsModel + ?Sized>(
    model: &M,
    x: &StateVec,
    u: &ControlVec,
    dt: f64,
    substeps: usize,
) -> Result<TrajectorySegment> {
    if x.dim() != model.state_dim() {
        return Err(Error::DimensionMismatch { expected: model.state_dim(), got: x.dim() });
    }
    if u.dim() != model.control_dim() {
        return Err(Error::DimensionMismatch { expected: model.control_dim(), got: u.dim() });
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidDuration(dt));
    }
    let substeps = substeps.max(1);
    let mut sampled_states = Vec::with_capacity(substeps);
    let end = integrate_visit(model, x, u, dt, substeps, |_, next| {
        sampled_states.push(*next);
        true
    })
    .ok_or(Error::NonFiniteState)?;
    Ok(TrajectorySegment {
        start: *x,
        control: *u,
        dt,
        end_state: end,
        sampled_states,
    })
}

/// Each component independently uniform on its control interval.
pub fn sample_control<M: DynamicsModel + ?Sized, R: RngCore + ?Sized>(
    model: &M,
    rng: &mut R,
) -> ControlVec {
    let lo = model.control_lo();
    let hi = model.control_hi();
    let mut u = ControlVec::zeros(model.control_dim());
    for i in 0..u.dim() {
        u[i] = if lo[i] == hi[i] {
            lo[i]
        } else {
            (lo[i] + unit_f64(rng) * (hi[i] - lo[i])).min(hi[i])
        };
    }
    u
}

/// Uniform on `(0, t_prop]`.
pub fn sample_duration<R: RngCore + ?Sized>(rng: &mut R, t_prop: f64) -> Result<f64> {
    if !(t_prop > 0.0) || !t_prop.is_finite() {
        return Err(Error::InvalidDuration(t_prop));
    }
    Ok(t_prop * (1.0 - unit_f64(rng)))
}
