use core::f64::consts::{FRAC_PI_3, PI};

use super::{DimKind, DynamicsModel};

pub const GRAVITY: f64 = 9.81;

/// Rigid-body quadcopter with Z-Y-X Euler angles.
///
/// State `(p[3], v[3], roll, pitch, yaw, p, q, r)`; control `(thrust,
/// tau_x, tau_y, tau_z)`. Thrust acts along the body z axis, gravity along
/// world -z, and body rates follow Euler's rotation equations for a diagonal
/// inertia.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadcopter12D {
    pub mass: f64,
    pub inertia: [f64; 3],
    pub control_lo: [f64; 4],
    pub control_hi: [f64; 4],
    pub state_lo: [f64; 12],
    pub state_hi: [f64; 12],
}

impl Default for Quadcopter12D {
    fn default() -> Self {
        let inf = f64::INFINITY;
        let (vmax, tilt, rate) = (6.0, FRAC_PI_3, 3.0);
        Self {
            mass: 1.0,
            inertia: [0.01, 0.01, 0.02],
            control_lo: [5.0, -0.02, -0.02, -0.01],
            control_hi: [15.0, 0.02, 0.02, 0.01],
            state_lo: [
                -inf, -inf, -inf, -vmax, -vmax, -vmax, -tilt, -tilt, -PI, -rate, -rate, -rate,
            ],
            state_hi: [
                inf, inf, inf, vmax, vmax, vmax, tilt, tilt, PI, rate, rate, rate,
            ],
        }
    }
}

impl DynamicsModel for Quadcopter12D {
    fn name(&self) -> &'static str {
        "quad12"
    }
    fn state_dim(&self) -> usize {
        12
    }
    fn control_dim(&self) -> usize {
        4
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
        match i {
            0..=2 => DimKind::Position,
            3..=5 => DimKind::Velocity,
            6 | 7 => DimKind::Angle,
            8 => DimKind::WrappedAngle,
            _ => DimKind::Velocity,
        }
    }

    #[inline]
    fn derivative_into(&self, x: &[f64], u: &[f64], out: &mut [f64]) {
        let (roll, pitch, yaw) = (x[6], x[7], x[8]);
        let (p, q, r) = (x[9], x[10], x[11]);
        let (sr, cr) = libm::sincos(roll);
        let (sp, cp) = libm::sincos(pitch);
        let (sy, cy) = libm::sincos(yaw);
        let [jx, jy, jz] = self.inertia;

        out[0] = x[3];
        out[1] = x[4];
        out[2] = x[5];

        // Third column of the body-to-world rotation scaled by thrust/mass.
        let a = u[0] / self.mass;
        out[3] = a * (cr * sp * cy + sr * sy);
        out[4] = a * (cr * sp * sy - sr * cy);
        out[5] = a * (cr * cp) - GRAVITY;

        let tp = sp / cp;
        out[6] = p + (q * sr + r * cr) * tp;
        out[7] = q * cr - r * sr;
        out[8] = (q * sr + r * cr) / cp;

        out[9] = ((jy - jz) * q * r + u[1]) / jx;
        out[10] = ((jz - jx) * p * r + u[2]) / jy;
        out[11] = ((jx - jy) * p * q + u[3]) / jz;
    }
}
