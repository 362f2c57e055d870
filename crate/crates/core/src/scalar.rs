//! Scalar abstraction shared by the polyhedral code.
//!
//! Geometry runs in one of two modes: exact (`BigRational`, zero tolerance,
//! reproducible vertex decisions) or float (`f64` with a pivot tolerance,
//! needed once liftings involve logarithms). The two modes share one code
//! path through this trait.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + PartialOrd + std::fmt::Debug {
    /// Exact arithmetic: comparisons against zero are decisions, not guesses.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;

    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Threshold below which a pivot candidate is treated as zero.
    fn pivot_tol() -> Self;
    /// Default strict-positivity tolerance for vertex/cell margins.
    fn default_margin_tol() -> Self;

    /// Equality used by support-distinctness checks: exact in rational
    /// mode, relative tolerance in float mode.
    fn coords_equal(&self, other: &Self) -> bool;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn pivot_tol() -> Self {
        <BigRational as Zero>::zero()
    }
    fn default_margin_tol() -> Self {
        <BigRational as Zero>::zero()
    }

    fn coords_equal(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }

    fn pivot_tol() -> Self {
        1e-11
    }
    fn default_margin_tol() -> Self {
        1e-9
    }

    fn coords_equal(&self, other: &Self) -> bool {
        let scale = 1.0f64.max(f64::abs(*self)).max(f64::abs(*other));
        f64::abs(self - other) <= 1e-12 * scale
    }
}

/// Converts an `f64` to the exact rational it represents.
///
/// Every finite double is a rational number, so this is lossless; it is
/// how sampled test points enter exact-mode membership checks.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
