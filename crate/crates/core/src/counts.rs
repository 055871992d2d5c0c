//! Closed-form counts for GL2 trace fibers, character differences and
//! matrices of prescribed trace and determinant over Z/p^nZ. Every formula
//! here has an enumeration oracle in `gl2` or in the brute-force sweeps of
//! the verify suite.

use crate::gl2;
use crate::modarith::{self, bc_pair_count, chi4, quad_char, sqrt_count};
use num::rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountsError {
    #[error("exponent k must lie in {{1, 2, 3}}, got {0}")]
    BadTwoExponent(u32),
    #[error("p = {0} must be an odd prime here")]
    NotOddPrime(u64),
    #[error("determinant {d} is divisible by p = {p}")]
    DetNotUnit { p: u64, d: u64 },
    #[error("sign-split factor {index} is inconsistent: |difference| {difference} vs total {total}")]
    InconsistentFactor { index: usize, total: u64, difference: i64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

fn require_odd_prime(p: u64) -> Result<(), CountsError> {
    if p < 3 || p % 2 == 0 || !modarith::is_prime(p) {
        return Err(CountsError::NotOddPrime(p));
    }
    Ok(())
}

/// |GL2(Z/nZ)| in closed form; agrees with enumeration for n <= 24.
pub fn gl2_order(n: u64) -> u128 {
    gl2::theoretical_order(n)
}

/// |GL2(Z/2^k Z)_r| for k in {1, 2, 3}: 2^(3k-1) for even r, 2^(3k-2) for odd.
pub fn fiber_order_2k(k: u32, r: u64) -> Result<u64, CountsError> {
    if !(1..=3).contains(&k) {
        return Err(CountsError::BadTwoExponent(k));
    }
    Ok(if r % 2 == 0 { 1u64 << (3 * k - 1) } else { 1u64 << (3 * k - 2) })
}

/// |{ g in GL2(F_p) : tr g = r, det g = d }| = p (p + ((r^2 - 4d)/p)).
pub fn trace_det_fiber_prime(p: u64, r: u64, d: u64) -> Result<u64, CountsError> {
    require_odd_prime(p)?;
    if d % p == 0 {
        return Err(CountsError::DetNotUnit { p, d });
    }
    let disc = (r as i128 * r as i128 - 4 * d as i128).rem_euclid(p as i128);
    let count = p as i64 * (p as i64 + quad_char(disc, p) as i64);
    Ok(count as u64)
}

/// |GL2(F_p)_r| = p (p^2 - p - [p does not divide r]) for odd p.
pub fn prime_fiber_order(p: u64, r: u64) -> u64 {
    debug_assert!(p % 2 == 1);
    let unit_trace = if r % p == 0 { 0 } else { 1 };
    p * (p * p - p - unit_trace)
}

/// One Chinese-remainder factor of a sign-split count: the size of the local
/// set and the signed difference of the two character preimages inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignSplitFactor {
    pub total: u64,
    pub difference: i64,
}

/// |psi_M^{-1}(sign) and X_M| = (|X_M| + sign * prod differences) / 2 for a
/// product-form set X_M and a product character psi_M.
pub fn sign_split_count(factors: &[SignSplitFactor], sign: i8) -> Result<u128, CountsError> {
    debug_assert!(sign == 1 || sign == -1);
    for (index, f) in factors.iter().enumerate() {
        let bad_magnitude = f.difference.unsigned_abs() > f.total;
        let bad_parity = (f.total % 2) != (f.difference.unsigned_abs() % 2);
        if bad_magnitude || bad_parity {
            return Err(CountsError::InconsistentFactor {
                index,
                total: f.total,
                difference: f.difference,
            });
        }
    }
    let total: i128 = factors.iter().map(|f| f.total as i128).product();
    let diff: i128 = factors.iter().map(|f| f.difference as i128).product();
    let value = if sign == 1 { total + diff } else { total - diff };
    debug_assert!(value >= 0 && value % 2 == 0);
    Ok((value / 2) as u128)
}

/// Difference |psi_p^{-1}(1)_r| - |psi_p^{-1}(-1)_r| over the trace fiber in
/// GL2(F_p), psi_p the Legendre character of the determinant:
/// (-1/p) p (p-1) when p | r, else -(-1/p) p.
pub fn psi_diff_odd(p: u64, r: u64) -> i64 {
    debug_assert!(p % 2 == 1);
    let minus_one = quad_char(-1, p) as i64;
    if r % p == 0 {
        minus_one * p as i64 * (p as i64 - 1)
    } else {
        -minus_one * p as i64
    }
}

/// Difference |psi_{2^k}^{-1}(1)_r| - |psi_{2^k}^{-1}(-1)_r| over the trace
/// fiber at level 2^k, where k and the character are fixed by the residue
/// class of the squarefree discriminant:
/// -(-1)^(r / 2^(k-1)) chi4(-delta_sf / 2) 2^(2k-1) when 2^(k-1) | r, else 0,
/// with chi4 of a half-integer read as 1.
pub fn psi_diff_two(delta_sf: i64, r: u64) -> i64 {
    let k = gl2::two_part_exponent(delta_sf);
    let r = r % (1u64 << k);
    let half = 1u64 << (k - 1);
    if r % half != 0 {
        return 0;
    }
    let chi = if delta_sf % 2 == 0 { chi4(-delta_sf / 2) as i64 } else { 1 };
    let parity_sign = if (r / half) % 2 == 0 { 1i64 } else { -1 };
    -parity_sign * chi * (1i64 << (2 * k - 1))
}

/// |Phi_p| = p (p^3 - 2p^2 - p + 3) for odd p.
pub fn phi_order_odd(p: u64) -> u64 {
    debug_assert!(p % 2 == 1);
    p * (p * p * p - 2 * p * p - p + 3)
}

/// Difference of the two psi preimages inside Phi at a prime-power factor:
/// p at odd primes, 2 at level 2, and 0 at levels 4 and 8.
pub fn phi_psi_diff(q: u64) -> Result<i64, CountsError> {
    let f = modarith::factorize(q as i128).map_err(|_| CountsError::NotPrimePower(q))?;
    if f.factors.len() != 1 {
        return Err(CountsError::NotPrimePower(q));
    }
    let (p, k) = f.factors[0];
    if p == 2 {
        return match k {
            1 => Ok(2),
            2 | 3 => Ok(0),
            other => Err(CountsError::BadTwoExponent(other)),
        };
    }
    if k != 1 {
        return Err(CountsError::NotPrimePower(q));
    }
    require_odd_prime(p)?;
    Ok(p as i64)
}

/// Exact |{ A in M_2(Z/p^n Z) : tr A = r, det A = d }| by the convolution
/// sum over y of N_(disc - y) * P_y, where N counts square roots and P counts
/// hyperbola points 4bc = y. This is the authoritative route; the closed
/// form below is evaluated separately for comparison.
pub fn matrix_count_trace_det(p: u64, n: u32, r: u64, d: u64) -> Result<u64, CountsError> {
    require_odd_prime(p)?;
    if d % p == 0 {
        return Err(CountsError::DetNotUnit { p, d });
    }
    debug_assert!(n >= 1);
    let q = p.pow(n);
    let disc = (r as i128 * r as i128 - 4 * d as i128).rem_euclid(q as i128) as u64;
    let mut count: u64 = 0;
    for y in 0..q {
        let nval = sqrt_count(p, n, (disc + q - y) % q);
        if nval != 0 {
            count += nval * bc_pair_count(p, n, y);
        }
    }
    Ok(count)
}

/// Which branch of the closed form a discriminant falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaBranch {
    /// disc = 0 mod p^n, n odd
    FullValuationOdd,
    /// disc = 0 mod p^n, n even
    FullValuationEven,
    /// odd valuation below n
    OddValuation,
    /// even valuation below n; `legendre` is the symbol of the unit part
    EvenValuation { legendre: i32 },
}

/// Side-by-side report: convolution ground truth, the closed-form value
/// p^2n (1 + 1/p + f(p, disc)), and the bound p^2n (1 + 3/p).
///
/// The closed form disagrees with enumeration on the even-valuation split
/// branch (legendre = +1); `closed_form_agrees` records this per input and
/// the verify suite lists those cases as expected deviations.
#[derive(Debug, Clone)]
pub struct MatrixCountReport {
    pub p: u64,
    pub n: u32,
    pub r: u64,
    pub d: u64,
    pub convolution: u64,
    pub closed_form: Ratio<i128>,
    pub branch: FormulaBranch,
    pub bound: Ratio<i128>,
    pub closed_form_agrees: bool,
    pub within_bound: bool,
}

pub fn matrix_count_report(p: u64, n: u32, r: u64, d: u64) -> Result<MatrixCountReport, CountsError> {
    let convolution = matrix_count_trace_det(p, n, r, d)?;
    let q = p.pow(n) as i128;
    let disc = (r as i128 * r as i128 - 4 * d as i128).rem_euclid(q) as u64;

    let (delta, unit) = {
        let mut v = 0u32;
        let mut t = disc;
        if t == 0 {
            (n, 0u64)
        } else {
            while t % p == 0 {
                t /= p;
                v += 1;
            }
            (v, t)
        }
    };

    let pi = p as i128;
    let one = Ratio::from_integer(1i128);
    let (f_value, branch) = if delta == n {
        if n % 2 == 1 {
            (-Ratio::new(1, pi.pow((n + 1) / 2)), FormulaBranch::FullValuationOdd)
        } else {
            (-Ratio::new(1, pi.pow((n + 2) / 2)), FormulaBranch::FullValuationEven)
        }
    } else if delta % 2 == 1 {
        (
            -(Ratio::new(1, pi.pow((delta + 1) / 2)) + Ratio::new(1, pi.pow((delta + 3) / 2))),
            FormulaBranch::OddValuation,
        )
    } else {
        let legendre = quad_char(unit as i128, p);
        let dl = delta as i128;
        let inner = Ratio::from_integer(legendre as i128)
            * (Ratio::from_integer(dl + 2) - Ratio::new(dl + 1, pi))
            + Ratio::from_integer(dl)
            - Ratio::new(dl + 1, pi);
        (inner / Ratio::from_integer(pi.pow(delta / 2 + 1)), FormulaBranch::EvenValuation { legendre })
    };

    let closed_form = Ratio::from_integer(q * q) * (one + Ratio::new(1, pi) + f_value);
    let bound = Ratio::from_integer(q * q) * (one + Ratio::new(3, pi));
    let conv_ratio = Ratio::from_integer(convolution as i128);
    Ok(MatrixCountReport {
        p,
        n,
        r,
        d,
        convolution,
        closed_form,
        branch,
        bound,
        closed_form_agrees: closed_form == conv_ratio,
        within_bound: conv_ratio <= bound,
    })
}
