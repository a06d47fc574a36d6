use super::{DimKind, DynamicsModel};

/// Point mass with direct acceleration control: `p' = v`, `v' = u`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleIntegrator6D {
    pub control_lo: [f64; 3],
    pub control_hi: [f64; 3],
    pub state_lo: [f64; 6],
    pub state_hi: [f64; 6],
}

impl DoubleIntegrator6D {
    pub fn new(max_accel: f64, max_speed: f64) -> Self {
        let inf = f64::INFINITY;
        Self {
            control_lo: [-max_accel; 3],
            control_hi: [max_accel; 3],
            state_lo: [-inf, -inf, -inf, -max_speed, -max_speed, -max_speed],
            state_hi: [inf, inf, inf, max_speed, max_speed, max_speed],
        }
    }
}

impl Default for DoubleIntegrator6D {
    fn default() -> Self {
        Self::new(2.0, 5.0)
    }
}

impl DynamicsModel for DoubleIntegrator6D {
    fn name(&self) -> &'static str {
        "di6"
    }
    fn state_dim(&self) -> usize {
        6
    }
    fn control_dim(&self) -> usize {
        3
    }
    fn control_lo(&self) -> &[f64] {
        &self.control_lo
    }
    fn control_hi(&self) -> &[f64] {
        &self.control_hi
    }
    fn state_lo(&self) -> &[f64] {
        &self.state_lo
    }
    fn state_hi(&self) -> &[f64] {
        &self.state_hi
    }
    fn dim_kind(&self, i: usize) -> DimKind {
        if i < 3 {
            DimKind::Position
        } else {
            DimKind::Velocity
        }
    }

    #[inline]
    fn derivative_into(&self, x: &[f64], u: &[f64], out: &mut [f64]) {
        out[..3].copy_from_slice(&x[3..6]);
        out[3..6].copy_from_slice(&u[..3]);
    }

    fn normalize(&self, _x: &mut [f64]) {}
}
