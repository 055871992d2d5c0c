//! Elliptic-curve reduction data: Frobenius traces by character-sum point
//! counting, exact group structure mod p, and the per-prime predicates
//! feeding the counting functions.

mod field;
mod group;

use crate::modarith;
use crate::primes;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CurveError {
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    Singular,
    #[error("p = {0} is a prime of bad reduction (or not an odd prime)")]
    BadReduction(u64),
    #[error("cache failure: {0}")]
    Cache(#[from] CacheError),
}

/// Cache I/O failures, kept distinct from arithmetic errors.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("{0}")]
pub struct CacheError(pub String);

/// A curve Y^2 = X^3 + aX + b with nonzero discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve {
    a: i64,
    b: i64,
}

impl Curve {
    pub fn new(a: i64, b: i64) -> Result<Curve, CurveError> {
        if 4 * (a as i128).pow(3) + 27 * (b as i128).pow(2) == 0 {
            return Err(CurveError::Singular);
        }
        Ok(Curve { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// 4a^3 + 27b^2; the discriminant is -16 times this.
    pub fn disc_core(&self) -> i128 {
        4 * (self.a as i128).pow(3) + 27 * (self.b as i128).pow(2)
    }

    pub fn discriminant(&self) -> i128 {
        -16 * self.disc_core()
    }

    /// Good reduction at p: odd prime p with p not dividing the discriminant.
    /// 16 divides the discriminant, so p = 2 is always bad.
    pub fn is_good_prime(&self, p: u64) -> bool {
        p >= 3 && p % 2 == 1 && modarith::is_prime(p) && self.disc_core() % p as i128 != 0
    }

    /// j = 6912 a^3 / (4a^3 + 27b^2), exact.
    pub fn j_invariant(&self) -> num::BigRational {
        num::BigRational::new(
            num::BigInt::from(6912 * (self.a as i128).pow(3)),
            num::BigInt::from(self.disc_core()),
        )
    }
}

/// Reduction data at one good prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusRecord {
    pub p: u64,
    pub a_p: i64,
    pub order: u64,
    pub cyclic: bool,
    pub prime_order: bool,
}

/// Frobenius trace a_p = -sum over x of ((x^3 + ax + b)/p), via a per-prime
/// square table and finite differences of the cubic. O(p) per prime.
pub fn frobenius_trace(curve: &Curve, p: u64) -> Result<i64, CurveError> {
    let chi = field::chi_table(p);
    frobenius_trace_with_table(curve, p, &chi)
}

/// Square-character table for p, reusable across curves at the same prime.
pub fn character_table(p: u64) -> Vec<i8> {
    field::chi_table(p)
}

/// Trace computation with a caller-supplied character table (batch scans
/// share one table per prime across a whole curve box).
pub fn frobenius_trace_with_table(curve: &Curve, p: u64, chi: &[i8]) -> Result<i64, CurveError> {
    if !curve.is_good_prime(p) {
        return Err(CurveError::BadReduction(p));
    }
    debug_assert_eq!(chi.len() as u64, p);
    let a = curve.a.rem_euclid(p as i64) as u64;
    let b = curve.b.rem_euclid(p as i64) as u64;
    // f(x+1) - f(x) = 3x^2 + 3x + 1 + a, second difference 6x + 6
    let mut f = b;
    let mut d1 = (1 + a) % p;
    let mut d2 = 6 % p;
    let mut sum: i64 = 0;
    for _ in 0..p {
        sum += chi[f as usize] as i64;
        f += d1;
        if f >= p {
            f -= p;
        }
        d1 += d2;
        if d1 >= p {
            d1 -= p;
        }
        d2 += 6;
        if d2 >= p {
            d2 -= p;
        }
    }
    let a_p = -sum;
    assert!(a_p * a_p <= 4 * p as i64, "Hasse bound violated at p={p}");
    Ok(a_p)
}

const STRUCTURE_SEED: u64 = 0xecc0;

/// Invariant-factor decomposition (n1, n2) of E(F_p): n1 | n2,
/// n1 n2 = |E(F_p)| and n1 | p - 1.
pub fn group_structure(curve: &Curve, p: u64) -> Result<(u64, u64), CurveError> {
    let a_p = frobenius_trace(curve, p)?;
    Ok(group::structure_exact(curve.a, curve.b, p, a_p, STRUCTURE_SEED))
}

/// (cyclic, prime_order) at a good prime.
pub fn predicates(curve: &Curve, p: u64) -> Result<(bool, bool), CurveError> {
    let a_p = frobenius_trace(curve, p)?;
    Ok(flags_for(curve, p, a_p, STRUCTURE_SEED))
}

fn flags_for(curve: &Curve, p: u64, a_p: i64, seed: u64) -> (bool, bool) {
    let order = (p as i64 + 1 - a_p) as u64;
    let cyclic = group::is_cyclic(curve.a, curve.b, p, a_p, seed);
    (cyclic, modarith::is_prime(order))
}

/// Roots of the 2-division cubic mod p: 0, 1 or 3 at good primes. The count
/// decides the parity class of Frobenius acting on the 2-torsion.
pub fn cubic_roots_mod_p(curve: &Curve, p: u64) -> u32 {
    let a = curve.a.rem_euclid(p as i64) as u64;
    let b = curve.b.rem_euclid(p as i64) as u64;
    field::cubic_root_count(a, b, p)
}

/// Persistent a_p store keyed by (a, b, p). Implementations must keep `get`
/// infallible (load failures surface at construction) and report write
/// failures through `CacheError`.
pub trait ApCache {
    fn get(&self, a: i64, b: i64, p: u64) -> Option<i64>;
    fn put(&mut self, a: i64, b: i64, p: u64, a_p: i64) -> Result<(), CacheError>;
}

/// No-op cache.
pub struct NoCache;

impl ApCache for NoCache {
    fn get(&self, _: i64, _: i64, _: u64) -> Option<i64> {
        None
    }
    fn put(&mut self, _: i64, _: i64, _: u64, _: i64) -> Result<(), CacheError> {
        Ok(())
    }
}

/// In-memory cache for tests and library callers.
#[derive(Default, Debug, Clone)]
pub struct MemCache(pub std::collections::BTreeMap<(i64, i64, u64), i64>);

impl ApCache for MemCache {
    fn get(&self, a: i64, b: i64, p: u64) -> Option<i64> {
        self.0.get(&(a, b, p)).copied()
    }
    fn put(&mut self, a: i64, b: i64, p: u64, a_p: i64) -> Result<(), CacheError> {
        self.0.insert((a, b, p), a_p);
        Ok(())
    }
}

/// Records for every good prime in [3, x], ascending, through the cache.
pub fn frobenius_stream(
    curve: &Curve,
    x: u64,
    cache: &mut dyn ApCache,
) -> Result<Vec<FrobeniusRecord>, CurveError> {
    frobenius_stream_seeded(curve, x, cache, STRUCTURE_SEED)
}

pub fn frobenius_stream_seeded(
    curve: &Curve,
    x: u64,
    cache: &mut dyn ApCache,
    seed: u64,
) -> Result<Vec<FrobeniusRecord>, CurveError> {
    let mut records = Vec::new();
    if x < 3 {
        return Ok(records);
    }
    for p in primes::primes_in(3, x) {
        if !curve.is_good_prime(p) {
            continue;
        }
        let a_p = match cache.get(curve.a, curve.b, p) {
            Some(v) => {
                debug_assert_eq!(v, frobenius_trace(curve, p)?);
                v
            }
            None => {
                let v = frobenius_trace(curve, p)?;
                cache.put(curve.a, curve.b, p, v)?;
                v
            }
        };
        records.push(record_for(curve, p, a_p, seed));
    }
    Ok(records)
}

pub(crate) fn record_for(curve: &Curve, p: u64, a_p: i64, seed: u64) -> FrobeniusRecord {
    let order = (p as i64 + 1 - a_p) as u64;
    let (cyclic, prime_order) = flags_for(curve, p, a_p, seed);
    FrobeniusRecord { p, a_p, order, cyclic, prime_order }
}
