//! Affine point arithmetic and the exact group-structure machinery.
//!
//! Cyclicity at a prime l only needs deciding whether the full l-torsion is
//! rational. That is a cubic root count at l = 2 and a quartic root count at
//! l = 3; for larger l (or higher l-power torsion) a randomized negative
//! certificate usually settles it, with an exhaustive torsion count as the
//! exact fallback.

use super::field::{chi_table, cubic_root_count, sqrt_mod, three_torsion_x_count};
use crate::modarith::{factorize, mul_mod, pow_mod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pt {
    Inf,
    At(u64, u64),
}

pub(crate) fn ec_add(p: u64, a: u64, lhs: Pt, rhs: Pt) -> Pt {
    let (x1, y1) = match lhs {
        Pt::Inf => return rhs,
        Pt::At(x, y) => (x, y),
    };
    let (x2, y2) = match rhs {
        Pt::Inf => return lhs,
        Pt::At(x, y) => (x, y),
    };
    let lambda = if x1 == x2 {
        if (y1 + y2) % p == 0 {
            return Pt::Inf;
        }
        // tangent: (3x^2 + a) / 2y
        let num = (3 * mul_mod(x1, x1, p) % p + a) % p;
        let den = 2 * y1 % p;
        mul_mod(num, pow_mod(den, p - 2, p), p)
    } else {
        let num = (y2 + p - y1) % p;
        let den = (x2 + p - x1) % p;
        mul_mod(num, pow_mod(den, p - 2, p), p)
    };
    let x3 = (mul_mod(lambda, lambda, p) + 2 * p - x1 - x2) % p;
    let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
    Pt::At(x3, y3)
}

pub(crate) fn ec_mul(p: u64, a: u64, mut k: u64, pt: Pt) -> Pt {
    let mut acc = Pt::Inf;
    let mut base = pt;
    while k > 0 {
        if k & 1 == 1 {
            acc = ec_add(p, a, acc, base);
        }
        base = ec_add(p, a, base, base);
        k >>= 1;
    }
    acc
}

fn curve_rhs(p: u64, a: u64, b: u64, x: u64) -> u64 {
    (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p
}

/// Deterministic per-(a, b, p) stream so results are independent of thread
/// scheduling and worker count.
fn rng_for(a: i64, b: i64, p: u64, seed: u64) -> ChaCha8Rng {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in [a as u64, b as u64, p] {
        h ^= v.wrapping_mul(0xff51_afd7_ed55_8ccd).rotate_left(31);
        h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn random_point(p: u64, a: u64, b: u64, rng: &mut ChaCha8Rng) -> Pt {
    loop {
        let x = rng.random_range(0..p);
        let t = curve_rhs(p, a, b, x);
        if t == 0 {
            return Pt::At(x, 0);
        }
        if pow_mod(t, (p - 1) / 2, p) == 1 {
            return Pt::At(x, sqrt_mod(t, p));
        }
    }
}

/// All affine points, via one character-table pass.
fn enumerate_points(p: u64, a: u64, b: u64) -> Vec<Pt> {
    let chi = chi_table(p);
    let mut points = Vec::new();
    for x in 0..p {
        let t = curve_rhs(p, a, b, x);
        match chi[t as usize] {
            0 => points.push(Pt::At(x, 0)),
            1 => {
                let y = sqrt_mod(t, p);
                points.push(Pt::At(x, y));
                points.push(Pt::At(x, p - y));
            }
            _ => {}
        }
    }
    points
}

/// |{ P : mP = O }| by exhaustive scan; exact but O(p) point operations.
fn torsion_count(p: u64, a: u64, b: u64, m: u64) -> u64 {
    let mut count = 1; // the point at infinity
    for pt in enumerate_points(p, a, b) {
        if ec_mul(p, a, m, pt) == Pt::Inf {
            count += 1;
        }
    }
    count
}

/// l-adic valuation of the order of P, given N = |E(F_p)| and v = v_l(N).
fn point_l_valuation(p: u64, a: u64, pt: Pt, n_order: u64, l: u64, v: u32) -> u32 {
    let cofactor = n_order / l.pow(v);
    let mut q = ec_mul(p, a, cofactor, pt);
    let mut s = 0;
    while q != Pt::Inf {
        q = ec_mul(p, a, l, q);
        s += 1;
    }
    s
}

const NEGATIVE_SAMPLES: u32 = 24;

/// Is E[l^m] fully rational over F_p? Caller guarantees l^(2m) | N and
/// l^m | p - 1.
fn full_torsion(p: u64, a: u64, b: u64, n_order: u64, l: u64, v: u32, m: u32, seed: u64, curve_a: i64, curve_b: i64) -> bool {
    if m == 1 && l == 2 {
        return cubic_root_count(a, b, p) == 3;
    }
    if m == 1 && l == 3 && p > 3 {
        // full 3-torsion has 4 rational x-coordinates; a proper unipotent
        // Frobenius action leaves exactly 1 (conditions l | p-1, l^2 | N
        // force the action to be unipotent)
        return three_torsion_x_count(a, b, p) == 4;
    }
    if p < 60 {
        return torsion_count(p, a, b, l.pow(m)) == l.pow(2 * m);
    }
    // randomized negative certificate: any point whose l-part exceeds
    // l^(v - m) rules full l^m-torsion out
    let mut rng = rng_for(curve_a, curve_b, p, seed.wrapping_add(m as u64));
    for _ in 0..NEGATIVE_SAMPLES {
        let pt = random_point(p, a, b, &mut rng);
        if point_l_valuation(p, a, pt, n_order, l, v) > v - m {
            return false;
        }
    }
    // exhaustive confirmation
    torsion_count(p, a, b, l.pow(m)) == l.pow(2 * m)
}

/// Exact invariant factors (n1, n2) with n1 | n2, n1 n2 = N and n1 | p - 1.
pub(crate) fn structure_exact(curve_a: i64, curve_b: i64, p: u64, a_p: i64, seed: u64) -> (u64, u64) {
    let n_order = (p as i64 + 1 - a_p) as u64;
    if n_order == 1 {
        return (1, 1);
    }
    let a = curve_a.rem_euclid(p as i64) as u64;
    let b = curve_b.rem_euclid(p as i64) as u64;
    let mut n1 = 1u64;
    for &(l, e) in &factorize(n_order as i128).expect("N >= 1").factors {
        if e < 2 || (p - 1) % l != 0 {
            continue;
        }
        let mut vp = 0u32;
        let mut t = p - 1;
        while t % l == 0 {
            t /= l;
            vp += 1;
        }
        let vmax = (e / 2).min(vp);
        let mut j = 0;
        while j < vmax && full_torsion(p, a, b, n_order, l, e, j + 1, seed, curve_a, curve_b) {
            j += 1;
        }
        n1 *= l.pow(j);
    }
    (n1, n_order / n1)
}

/// Cyclicity alone: no prime has fully rational l-torsion. Skips the
/// higher-power probes that the full structure needs.
pub(crate) fn is_cyclic(curve_a: i64, curve_b: i64, p: u64, a_p: i64, seed: u64) -> bool {
    let n_order = (p as i64 + 1 - a_p) as u64;
    if n_order == 1 {
        return true;
    }
    let a = curve_a.rem_euclid(p as i64) as u64;
    let b = curve_b.rem_euclid(p as i64) as u64;
    for &(l, e) in &factorize(n_order as i128).expect("N >= 1").factors {
        if e < 2 || (p - 1) % l != 0 {
            continue;
        }
        if full_torsion(p, a, b, n_order, l, e, 1, seed, curve_a, curve_b) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Structure oracle: exponent = lcm of every point order.
    fn structure_brute(p: u64, a: u64, b: u64) -> (u64, u64) {
        let points = enumerate_points(p, a, b);
        let n = points.len() as u64 + 1;
        let mut exponent = 1u64;
        for &pt in &points {
            let mut o = 1u64;
            let mut q = pt;
            while q != Pt::Inf {
                q = ec_add(p, a, q, pt);
                o += 1;
            }
            exponent = exponent / crate::modarith::gcd_u64(exponent, o) * o;
        }
        (n / exponent, exponent)
    }

    #[test]
    fn point_arithmetic_basics() {
        // y^2 = x^3 + 1 over F_7 has 12 points
        let points = enumerate_points(7, 0, 1);
        assert_eq!(points.len(), 11);
        for &pt in &points {
            assert_eq!(ec_mul(7, 0, 12, pt), Pt::Inf);
        }
    }

    #[test]
    fn structure_matches_brute_force() {
        let seed = 7;
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
            for (a, b) in [(1i64, 0i64), (0, 1), (1, 1), (-1, 1), (2, 3), (-2, 5), (3, -4)] {
                let core = 4 * a.pow(3) + 27 * b.pow(2);
                if core == 0 || core.rem_euclid(p as i64) == 0 {
                    continue;
                }
                let am = a.rem_euclid(p as i64) as u64;
                let bm = b.rem_euclid(p as i64) as u64;
                let (bn1, bn2) = structure_brute(p, am, bm);
                let n = bn1 * bn2;
                let a_p = p as i64 + 1 - n as i64;
                let (n1, n2) = structure_exact(a, b, p, a_p, seed);
                assert_eq!((n1, n2), (bn1, bn2), "p={p} a={a} b={b}");
                assert_eq!(is_cyclic(a, b, p, a_p, seed), n1 == 1);
            }
        }
    }

    #[test]
    fn torsion_count_is_square_when_full() {
        // curve (1, 0) over F_5: structure (2, 2), full 2-torsion
        assert_eq!(torsion_count(5, 1, 0, 2), 4);
        // (0, 1) over F_7: structure (2, 6)
        assert_eq!(torsion_count(7, 0, 1, 2), 4);
        assert_eq!(torsion_count(7, 0, 1, 3), 3);
    }
}
