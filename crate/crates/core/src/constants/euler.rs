//! Certified Euler-product intervals for the universal average constants.
//!
//! Each constant is an infinite product over primes of a local density. The
//! product over primes up to a per-family certified range is accumulated in
//! outward-rounded f64 interval arithmetic (decade-aligned segments, cached,
//! so requests at different cutoffs share identical suffix factors and their
//! intervals nest by construction); the remainder beyond that range is
//! bracketed by an elementary odd-integer tail bound. For the trace constant
//! at r = 0 every prime divides r and the product telescopes through the
//! Euler product of zeta(2), so the interval collapses to pi/3 up to
//! floating-point slack.

use super::{ConstantKind, ConstantValue};
use crate::modarith::factorize;
use crate::primes;
use num::{BigInt, BigRational, FromPrimitive};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Positive interval with outward slack applied after every operation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Iv {
    pub lo: f64,
    pub hi: f64,
}

const SLACK: f64 = 1e-15;

impl Iv {
    pub fn point(x: f64) -> Iv {
        debug_assert!(x > 0.0);
        Iv { lo: x * (1.0 - SLACK), hi: x * (1.0 + SLACK) }
    }

    pub fn exact(x: f64) -> Iv {
        Iv { lo: x, hi: x }
    }

    pub fn mul(self, o: Iv) -> Iv {
        debug_assert!(self.lo > 0.0 && o.lo > 0.0);
        Iv { lo: self.lo * o.lo * (1.0 - SLACK), hi: self.hi * o.hi * (1.0 + SLACK) }
    }
}

/// pi lies in [PI_LO, PI_HI]: the f64 constant rounds pi down.
const PI_LO: f64 = std::f64::consts::PI;
const PI_HI: f64 = std::f64::consts::PI + 1e-15;

fn two_over_pi() -> Iv {
    Iv { lo: 2.0 / PI_HI * (1.0 - SLACK), hi: 2.0 / PI_LO * (1.0 + SLACK) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Family {
    /// 1 - 1/((l-1)(l^2-1)), the trace-constant factor at primes not dividing r.
    TraceNonDiv,
    /// 1 - (l^2-l-1)/((l-1)^3 (l+1)), the prime-order factor.
    Prime,
    /// 1 - 1/(l (l-1)^2 (l+1)), the cyclicity factor.
    Cyclic,
}

impl Family {
    /// Certified direct-product range: primes up to this bound enter the
    /// interval product; beyond it the elementary remainder bracket applies.
    fn certified_range(self) -> u64 {
        match self {
            Family::TraceNonDiv => 1_000_000,
            Family::Prime => 10_000_000,
            Family::Cyclic => 1_000_000,
        }
    }

    fn local_factor(self, l: u64) -> f64 {
        let lf = l as f64;
        match self {
            Family::TraceNonDiv => {
                let den = (l as u128 - 1) * (l as u128 * l as u128 - 1);
                1.0 - 1.0 / den as f64
            }
            Family::Prime => {
                let num = (l as u128 * l as u128 - l as u128 - 1) as f64;
                let den = (lf - 1.0).powi(3) * (lf + 1.0);
                1.0 - num / den
            }
            Family::Cyclic => {
                let den = l as u128 * (l as u128 - 1) * (l as u128 - 1) * (l as u128 + 1);
                1.0 - 1.0 / den as f64
            }
        }
    }

    /// [1 - s, 1] bracketing the product over all primes beyond `x`, using
    /// sum over odd n > x of kappa / n^e  <=  kappa / (2 (e-1) (x-2)^(e-1)).
    fn remainder_bracket(self, x: u64) -> Iv {
        let xf = (x - 2) as f64;
        let (kappa, e) = match self {
            Family::TraceNonDiv => (1.01, 3),
            Family::Prime => (1.05, 2),
            Family::Cyclic => (1.05, 4),
        };
        let s = kappa / (2.0 * (e as f64 - 1.0) * xf.powi(e - 1));
        Iv { lo: (1.0 - s) * (1.0 - SLACK), hi: 1.0 }
    }
}

/// Product of local factors over primes in [lo, hi], skipping `skip`.
fn stretch_product(family: Family, lo: u64, hi: u64, skip: &[u64]) -> Iv {
    let mut acc = Iv::exact(1.0);
    for p in primes::primes_in(lo, hi) {
        if skip.contains(&p) {
            continue;
        }
        acc = acc.mul(Iv::point(family.local_factor(p)));
    }
    acc
}

/// Decade segment [10^j, 10^(j+1)) products, cached per family. Cached
/// segments never include skipped primes; segments touching a skip prime
/// are recomputed on the fly.
fn segment_product(family: Family, j: u32, skip: &[u64]) -> Iv {
    static CACHE: OnceLock<Mutex<HashMap<(Family, u32), Iv>>> = OnceLock::new();
    let lo = 10u64.pow(j);
    let hi = 10u64.pow(j + 1) - 1;
    let touched = skip.iter().any(|&p| p >= lo && p <= hi);
    if touched {
        return stretch_product(family, lo, hi, skip);
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(iv) = cache.lock().unwrap().get(&(family, j)) {
        return *iv;
    }
    let iv = stretch_product(family, lo, hi, &[]);
    cache.lock().unwrap().insert((family, j), iv);
    iv
}

/// Interval for prod over all primes of the family factor, with the direct
/// range extended to at least the requested cutoff (decade-aligned).
fn family_product(family: Family, cutoff: u64, skip: &[u64]) -> Iv {
    let mut x = family.certified_range();
    while x < cutoff.min(100_000_000) {
        x *= 10;
    }
    // [2, 10) then decades up to x = 10^J
    let mut acc = stretch_product(family, 2, 9, skip);
    let mut j = 1;
    while 10u64.pow(j) < x {
        acc = acc.mul(segment_product(family, j, skip));
        j += 1;
    }
    acc.mul(family.remainder_bracket(x))
}

/// C_r: (2/pi) prod_{l | r} (1 + 1/(l^2-1)) prod_{l not | r} (1 - 1/((l-1)(l^2-1))).
///
/// For r = 0 every prime divides r and the product telescopes to
/// (2/pi) zeta(2) = pi/3, certified through the pi bracket alone.
pub fn universal_trace_constant(r: i64, cutoff: u64) -> ConstantValue {
    let product = if r == 0 {
        Iv { lo: PI_LO / 3.0 * (1.0 - SLACK), hi: PI_HI / 3.0 * (1.0 + SLACK) }
    } else {
        let rfac = factorize(r as i128).expect("r != 0");
        let divisor_primes: Vec<u64> = rfac.factors.iter().map(|&(p, _)| p).collect();
        let mut divisor_part = BigRational::from_integer(BigInt::from(1));
        for &p in &divisor_primes {
            let p2 = BigInt::from(p) * BigInt::from(p);
            divisor_part *= BigRational::from_integer(p2.clone())
                / BigRational::from_integer(p2 - BigInt::from(1));
        }
        let (dlo, dhi) = super::ratio_to_f64_interval(&divisor_part);
        two_over_pi()
            .mul(Iv { lo: dlo, hi: dhi })
            .mul(family_product(Family::TraceNonDiv, cutoff, &divisor_primes))
    };
    ConstantValue {
        kind: ConstantKind::Trace { r },
        ratio: BigRational::from_i64(1).unwrap(),
        product_lo: product.lo,
        product_hi: product.hi,
        cutoff,
    }
}

/// C_prime: prod over all primes of (1 - (l^2-l-1)/((l-1)^3 (l+1))).
pub fn universal_prime_constant(cutoff: u64) -> ConstantValue {
    let product = family_product(Family::Prime, cutoff, &[]);
    ConstantValue {
        kind: ConstantKind::Prime,
        ratio: BigRational::from_i64(1).unwrap(),
        product_lo: product.lo,
        product_hi: product.hi,
        cutoff,
    }
}

/// C_cyclic: prod over all primes of (1 - 1/(l (l-1)^2 (l+1))).
pub fn universal_cyclic_constant(cutoff: u64) -> ConstantValue {
    let product = family_product(Family::Cyclic, cutoff, &[]);
    ConstantValue {
        kind: ConstantKind::Cyclic,
        ratio: BigRational::from_i64(1).unwrap(),
        product_lo: product.lo,
        product_hi: product.hi,
        cutoff,
    }
}

/// Universal constant for a kind, dispatching on the stored trace residue.
pub fn universal_constant(kind: ConstantKind, cutoff: u64) -> ConstantValue {
    match kind {
        ConstantKind::Trace { r } => universal_trace_constant(r, cutoff),
        ConstantKind::Prime => universal_prime_constant(cutoff),
        ConstantKind::Cyclic => universal_cyclic_constant(cutoff),
    }
}
