//! The universal average constants (Lang-Trotter trace constants C_r, the
//! Koblitz constant C_prime, the cyclicity constant C_cyclic) as certified
//! Euler-product intervals, and the exact per-curve constants a Serre curve
//! would carry, cross-validated against group enumeration.

mod euler;
mod serre;

pub use euler::{
    universal_cyclic_constant, universal_prime_constant, universal_trace_constant,
};
pub use serre::{
    delta_symbol, gl2_fiber_order_big, group_constant, serre_cyclic_constant,
    serre_cyclic_ratio, serre_invariants, serre_invariants_from_delta_sf, serre_prime_constant,
    serre_prime_ratio, serre_trace_constant, serre_trace_ratio, SerreInvariants,
};

use num::BigRational;
use num::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstantsError {
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    SingularCurve,
    #[error("curve coefficients exceed the desk-scale factorization bound")]
    CurveTooLarge,
    #[error("r = {r} is not divisible by 2^(k-1) = {half}")]
    BadTraceResidue { r: i64, half: u64 },
    #[error("group slice fails the subgroup spot-check: {0}")]
    NotASubgroup(String),
    #[error("level error: {0}")]
    Level(#[from] crate::gl2::Gl2Error),
}

/// Which constant a value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantKind {
    Trace { r: i64 },
    Prime,
    Cyclic,
}

impl std::fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstantKind::Trace { r } => write!(f, "trace r={r}"),
            ConstantKind::Prime => write!(f, "prime"),
            ConstantKind::Cyclic => write!(f, "cyclic"),
        }
    }
}

/// An exact rational curve-dependent ratio times a certified interval for
/// the corresponding universal Euler product. The certified value interval
/// is `ratio * [product_lo, product_hi]`.
#[derive(Debug, Clone)]
pub struct ConstantValue {
    pub kind: ConstantKind,
    pub ratio: BigRational,
    pub product_lo: f64,
    pub product_hi: f64,
    pub cutoff: u64,
}

impl ConstantValue {
    /// Lower endpoint of the certified value interval.
    pub fn lo(&self) -> f64 {
        let (rlo, _) = ratio_to_f64_interval(&self.ratio);
        rlo * self.product_lo * (1.0 - 1e-15)
    }

    /// Upper endpoint of the certified value interval.
    pub fn hi(&self) -> f64 {
        let (_, rhi) = ratio_to_f64_interval(&self.ratio);
        rhi * self.product_hi * (1.0 + 1e-15)
    }

    pub fn width(&self) -> f64 {
        self.hi() - self.lo()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    /// True when `self`'s interval lies inside `other`'s.
    pub fn nested_in(&self, other: &ConstantValue) -> bool {
        other.lo() <= self.lo() && self.hi() <= other.hi()
    }
}

/// Outward-rounded f64 bracket of an exact rational (positive or negative).
pub(crate) fn ratio_to_f64_interval(q: &BigRational) -> (f64, f64) {
    let t = q.to_f64().unwrap_or_else(|| {
        // scale down huge numerator/denominator pairs before dividing
        let shift = (q.numer().bits().max(q.denom().bits())).saturating_sub(900);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::MAX);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::MAX);
        n / d
    });
    let pad = t.abs() * 1e-14 + f64::MIN_POSITIVE;
    (t - pad, t + pad)
}
