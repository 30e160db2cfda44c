use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Field of evaluation points: real or complex doubles.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_real(x: f64) -> Self;
    fn zero() -> Self {
        Self::from_real(0.0)
    }
    fn one() -> Self {
        Self::from_real(1.0)
    }
    fn modulus(self) -> f64;
    fn scale(self, factor: f64) -> Self;
    fn to_complex(self) -> Complex64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

/// Binary exponent `e` such that `m * 2^-e` lies in `[0.5, 1)`, returned only
/// when `m` exceeds `limit`.
pub(crate) fn overflow_exponent(m: f64, limit: f64) -> Option<i32> {
    if m.is_finite() && m > limit {
        Some(libm::frexp(m).1)
    } else {
        None
    }
}

/// Same as [`overflow_exponent`] but for nonzero magnitudes below `1/limit`.
pub(crate) fn underflow_exponent(m: f64, limit: f64) -> Option<i32> {
    if m > 0.0 && m < 1.0 / limit {
        Some(libm::frexp(m).1)
    } else {
        None
    }
}
