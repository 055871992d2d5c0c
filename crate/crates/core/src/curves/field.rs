//! Prime-field helpers: quadratic-character tables, square roots, and root
//! counting for small polynomials via gcd with x^p - x.

use crate::modarith::{mul_mod, pow_mod};

/// Character table: chi[t] is 0 at t = 0, +1 on nonzero squares, -1 otherwise.
pub(crate) fn chi_table(p: u64) -> Vec<i8> {
    let mut table = vec![-1i8; p as usize];
    table[0] = 0;
    let mut y = 1u64;
    while y <= p / 2 {
        table[(y * y % p) as usize] = 1;
        y += 1;
    }
    table
}

/// Tonelli-Shanks square root mod an odd prime; `a` must be a square.
pub(crate) fn sqrt_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    // write p - 1 = q 2^s with q odd
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    // find a non-residue
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Dense little-endian polynomial over F_p, degree at most 7 in practice.
type Poly = Vec<u64>;

fn poly_trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_mul_mod(f: &Poly, g: &Poly, modulus: &Poly, p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; f.len() + g.len() - 1];
    for (i, &fi) in f.iter().enumerate() {
        if fi == 0 {
            continue;
        }
        for (j, &gj) in g.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(fi, gj, p)) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    prod
}

/// In-place remainder of f by a monic modulus.
fn poly_rem(f: &mut Poly, modulus: &Poly, p: u64) {
    let d = modulus.len() - 1;
    while f.len() > d {
        let lead = *f.last().unwrap();
        let deg = f.len() - 1;
        if lead != 0 {
            for i in 0..d {
                let t = mul_mod(lead, modulus[i], p);
                let idx = deg - d + i;
                f[idx] = (f[idx] + p - t) % p;
            }
        }
        f.pop();
    }
    poly_trim(f);
}

/// x^p mod f for monic f, by binary exponentiation.
fn x_pow_p_mod(modulus: &Poly, p: u64) -> Poly {
    let mut result = vec![1u64]; // 1
    let mut base = vec![0u64, 1]; // x
    poly_rem(&mut base, modulus, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &base, modulus, p);
        }
        base = poly_mul_mod(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(mut f: Poly, mut g: Poly, p: u64) -> Poly {
    poly_trim(&mut f);
    poly_trim(&mut g);
    while !g.is_empty() {
        // make g monic, reduce f mod g
        let lead = *g.last().unwrap();
        if lead != 1 {
            let inv = pow_mod(lead, p - 2, p);
            for c in g.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
        poly_rem(&mut f, &g, p);
        std::mem::swap(&mut f, &mut g);
    }
    f
}

/// Number of distinct roots of a monic squarefree polynomial mod p:
/// deg gcd(x^p - x, f).
pub(crate) fn root_count(f: &Poly, p: u64) -> u32 {
    debug_assert_eq!(*f.last().unwrap(), 1, "expect monic input");
    if (f.len() as u64 - 1) >= p {
        // tiny fields: direct scan
        let mut count = 0;
        for x in 0..p {
            let mut v = 0u64;
            for &c in f.iter().rev() {
                v = (mul_mod(v, x, p) + c) % p;
            }
            if v == 0 {
                count += 1;
            }
        }
        return count;
    }
    let mut xp = x_pow_p_mod(f, p);
    // xp - x
    if xp.len() < 2 {
        xp.resize(2, 0);
    }
    xp[1] = (xp[1] + p - 1) % p;
    let g = poly_gcd(f.clone(), xp, p);
    (g.len().max(1) - 1) as u32
}

/// Roots of x^3 + a x + b mod p: 0, 1 or 3 for a squarefree cubic.
pub(crate) fn cubic_root_count(a: u64, b: u64, p: u64) -> u32 {
    root_count(&vec![b % p, a % p, 0, 1], p)
}

/// Rational x-coordinates of 3-torsion: roots of the monic form of
/// 3x^4 + 6a x^2 + 12b x - a^2, valid for p > 3.
pub(crate) fn three_torsion_x_count(a: u64, b: u64, p: u64) -> u32 {
    debug_assert!(p > 3);
    let inv3 = pow_mod(3, p - 2, p);
    let a = a % p;
    let b = b % p;
    let c0 = mul_mod((p - mul_mod(a, a, p)) % p, inv3, p);
    let c1 = 4 * b % p;
    let c2 = 2 * a % p;
    root_count(&vec![c0, c1, c2, 0, 1], p)
}
