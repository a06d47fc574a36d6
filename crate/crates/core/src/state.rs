//! Fixed-capacity state and control vectors.
//!
//! Every supported model has at most [`MAX_STATE_DIM`] state dimensions and
//! [`MAX_CONTROL_DIM`] control inputs, so both vectors are stored inline and
//! are `Copy`. The planner keeps hundreds of thousands of them in its arena.

use core::fmt;
use core::ops::{Deref, DerefMut};

pub const MAX_STATE_DIM: usize = 12;
pub const MAX_CONTROL_DIM: usize = 4;

macro_rules! fixed_vec {
    ($name:ident, $cap:expr) => {
        #[derive(Clone, Copy, PartialEq)]
        pub struct $name {
            len: u8,
            values: [f64; $cap],
        }

        impl $name {
            pub const CAPACITY: usize = $cap;

            /// A zero vector of length `len`.
            ///
            /// Panics if `len` exceeds the inline capacity.
            pub fn zeros(len: usize) -> Self {
                assert!(len <= $cap, "dimension {} exceeds capacity {}", len, $cap);
                Self {
                    len: len as u8,
                    values: [0.0; $cap],
                }
            }

            pub fn from_slice(values: &[f64]) -> Self {
                let mut v = Self::zeros(values.len());
                v.values[..values.len()].copy_from_slice(values);
                v
            }

            #[inline]
            pub fn dim(&self) -> usize {
                self.len as usize
            }

            #[inline]
            pub fn as_slice(&self) -> &[f64] {
                &self.values[..self.len as usize]
            }

            #[inline]
            pub fn as_mut_slice(&mut self) -> &mut [f64] {
                &mut self.values[..self.len as usize]
            }

            pub fn is_finite(&self) -> bool {
                self.as_slice().iter().all(|v| v.is_finite())
            }

            /// Largest absolute componentwise difference.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.as_slice()
                    .iter()
                    .zip(other.as_slice())
                    .fold(0.0, |m, (a, b)| f64::max(m, libm::fabs(a - b)))
            }
        }

        impl Deref for $name {
            type Target = [f64];
            #[inline]
            fn deref(&self) -> &[f64] {
                self.as_slice()
            }
        }

        impl DerefMut for $name {
            #[inline]
            fn deref_mut(&mut self) -> &mut [f64] {
                self.as_mut_slice()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_list().entries(self.as_slice()).finish()
            }
        }

        impl From<&[f64]> for $name {
            fn from(values: &[f64]) -> Self {
                Self::from_slice(values)
            }
        }
    };
}

fixed_vec!(StateVec, MAX_STATE_DIM);
fixed_vec!(ControlVec, MAX_CONTROL_DIM);

/// Wraps an angle into `(-pi, pi]`.
#[inline]
pub fn wrap_angle(a: f64) -> f64 {
    use core::f64::consts::PI;
    if a > -PI && a <= PI {
        return a;
    }
    let two_pi = 2.0 * PI;
    let mut r = libm::fmod(a + PI, two_pi);
    if r < 0.0 {
        r += two_pi;
    }
    // r in [0, 2pi): shift back and move -pi onto pi.
    let w = r - PI;
    if w <= -PI {
        PI
    } else {
        w
    }
}
