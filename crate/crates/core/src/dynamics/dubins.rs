use core::f64::consts::FRAC_PI_4;

use super::{DimKind, DynamicsModel};
use crate::state::StateVec;

/// Dubins airplane with speed, heading and flight-path angle as state.
///
/// State `(px, py, pz, v, heading, gamma)`, control `(a, heading_rate,
/// gamma_rate)`:
///
/// ```text
/// px' = v cos(heading) cos(gamma)
/// py' = v sin(heading) cos(gamma)
/// pz' = v sin(gamma)
/// v' = a,  heading' = heading_rate,  gamma' = gamma_rate
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct DubinsAirplane6D {
    pub control_lo: [f64; 3],
    pub control_hi: [f64; 3],
    pub state_lo: [f64; 6],
    pub state_hi: [f64; 6],
}

impl Default for DubinsAirplane6D {
    fn default() -> Self {
        use core::f64::consts::PI;
        let inf = f64::INFINITY;
        Self {
            control_lo: [-1.0, -1.0, -0.5],
            control_hi: [1.0, 1.0, 0.5],
            state_lo: [-inf, -inf, -inf, 0.5, -PI, -FRAC_PI_4],
            state_hi: [inf, inf, inf, 3.0, PI, FRAC_PI_4],
        }
    }
}

impl DynamicsModel for DubinsAirplane6D {
    fn name(&self) -> &'static str {
        "dubins6"
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
        match i {
            0..=2 => DimKind::Position,
            3 => DimKind::Velocity,
            4 => DimKind::WrappedAngle,
            _ => DimKind::Angle,
        }
    }

    #[inline]
    fn derivative_into(&self, x: &[f64], u: &[f64], out: &mut [f64]) {
        let (v, heading, gamma) = (x[3], x[4], x[5]);
        let (sh, ch) = libm::sincos(heading);
        let (sg, cg) = libm::sincos(gamma);
        out[0] = v * ch * cg;
        out[1] = v * sh * cg;
        out[2] = v * sg;
        out[3] = u[0];
        out[4] = u[1];
        out[5] = u[2];
    }

    /// Rests at the lowest admissible cruise speed, heading along +x.
    fn rest_state(&self, position: [f64; 3]) -> StateVec {
        StateVec::from_slice(&[
            position[0],
            position[1],
            position[2],
            self.state_lo[3],
            0.0,
            0.0,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::derivative;
    use crate::state::ControlVec;

    #[test]
    fn level_flight_along_x() {
        let m = DubinsAirplane6D::default();
        let x = StateVec::from_slice(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let d = derivative(&m, &x, &ControlVec::zeros(3)).unwrap();
        assert_eq!(&*d, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn climb_and_turn_components() {
        let m = DubinsAirplane6D::default();
        let x = StateVec::from_slice(&[0.0, 0.0, 0.0, 2.0, core::f64::consts::FRAC_PI_2, FRAC_PI_4]);
        let u = ControlVec::from_slice(&[0.5, -0.25, 0.1]);
        let d = derivative(&m, &x, &u).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!(d[0].abs() < 1e-12);
        assert!((d[1] - 2.0 * s).abs() < 1e-12);
        assert!((d[2] - 2.0 * s).abs() < 1e-12);
        assert_eq!(&d[3..], &[0.5, -0.25, 0.1]);
    }
}
