//! Scalar abstraction shared by every module.
//!
//! All geometry and optimization code is written against [`Scalar`], which is
//! implemented for `f32` and `f64`. Tolerances are expressed in `f64` and
//! widened for low-precision types so that `f32` instantiations stay usable.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`, used for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Widens an `f64` tolerance so it is never below a few hundred ulps of
    /// this type.
    #[inline]
    fn tol(base: f64) -> Self {
        let floor = Self::epsilon().as_f64() * 256.0;
        Self::lit(base.max(floor))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Named tolerances.
pub mod tol {
    /// Algebraic identities (norms, completeness, closed forms).
    pub const ALGEBRAIC: f64 = 1e-12;
    /// Equalities that come out of an iterative optimization.
    pub const OPTIMIZATION: f64 = 1e-8;
    /// Default certification threshold.
    pub const CERTIFICATION: f64 = 1e-6;
    /// Smallest |det| of a direction triple that is not considered coplanar.
    pub const COPLANAR: f64 = 1e-9;
    /// Lowest eigenvalue still accepted as positive semidefinite.
    pub const PSD: f64 = 1e-10;
    /// Below this length a `u` or `z` vector is treated as zero.
    pub const ZERO_LENGTH: f64 = 1e-12;
}
