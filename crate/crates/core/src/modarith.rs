//! Integer and modular arithmetic primitives: factorization, squarefree
//! parts, quadratic characters, square-root and hyperbola counts modulo odd
//! prime powers, and ideal counts in quadratic fields.
//!
//! Sign conventions: `omega` and `gcd` applied to negative arguments use
//! absolute values, and `gcd(x, 0) = |x|`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModArithError {
    #[error("factorize rejects n = 0")]
    ZeroInput,
    #[error("input magnitude exceeds the 63-bit desk-scale bound")]
    TooLarge,
    #[error("ideal_norm_count rejects D = {0} (need squarefree D outside {{0, 1}})")]
    BadField(i64),
}

/// Sign and ordered prime-power decomposition of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Reconstructs the factored integer exactly.
    pub fn value(&self) -> i128 {
        let mut v: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                v *= p as i128;
            }
        }
        v
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full u64 range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd composite, not a prime power of 2.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 22 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// gcd with the absolute-value convention; `gcd(x, 0) = |x|`.
pub fn gcd_abs(a: i64, b: i64) -> u64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs())
}

fn factor_u64(mut n: u64, out: &mut Vec<(u64, u32)>) {
    debug_assert!(n > 0);
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // trial division below 10^6, Pollard rho above
    let mut d = 7u64;
    let inc = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while d <= 1_000_000 && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += inc[i];
        i = (i + 1) & 7;
    }
    if n == 1 {
        return;
    }
    if d * d > n || is_prime(n) {
        out.push((n, 1));
        return;
    }
    let mut stack = vec![n];
    let mut primes: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    primes.sort_unstable();
    let mut i = 0;
    while i < primes.len() {
        let p = primes[i];
        let mut e = 0;
        while i < primes.len() && primes[i] == p {
            e += 1;
            i += 1;
        }
        out.push((p, e));
    }
}

/// Prime factorization of a nonzero integer with |n| < 2^63.
pub fn factorize(n: i128) -> Result<Factorization, ModArithError> {
    if n == 0 {
        return Err(ModArithError::ZeroInput);
    }
    if n.unsigned_abs() >= 1 << 63 {
        return Err(ModArithError::TooLarge);
    }
    let sign = if n > 0 { 1 } else { -1 };
    let mut factors = Vec::new();
    if n.unsigned_abs() > 1 {
        factor_u64(n.unsigned_abs() as u64, &mut factors);
        factors.sort_unstable();
    }
    Ok(Factorization { sign, factors })
}

/// The unique squarefree integer `s` with `n / s` a perfect square.
pub fn squarefree_part(n: i128) -> Result<i128, ModArithError> {
    let f = factorize(n)?;
    let mut s: i128 = f.sign as i128;
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            s *= p as i128;
        }
    }
    Ok(s)
}

/// Legendre symbol (d/p) for an odd prime p, via Euler's criterion.
pub fn quad_char(d: i128, p: u64) -> i32 {
    debug_assert!(p > 2 && is_prime(p));
    let r = d.rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Character mod 4: +1 on 1, -1 on 3, 0 on even input.
pub fn chi4(n: i64) -> i32 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Character mod 8: +1 on ±1, -1 on ±3, 0 on even input.
pub fn chi8(n: i64) -> i32 {
    match n.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Kronecker symbol (a/n) for odd positive n.
///
/// Used as an independent route to the quadratic character attached to a
/// squarefree discriminant; the group-theoretic machinery computes the same
/// character as a product of local factors, and tests compare the two.
pub fn kronecker_odd(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1 && n > 0);
    let mut sym: i32 = 1;
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    // classical Jacobi loop with (2/n) = chi8(n)
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            sym *= chi8(n as i64);
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sym = -sym;
        }
        a %= n;
    }
    if n == 1 {
        sym
    } else {
        0
    }
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.pow(e)
}

/// Number of solutions x mod p^n of x^2 = y, for odd prime p.
///
/// Closed form: p^(floor(n/2)) when y = 0; p^m (1 + (y'/p)) when
/// y = p^(2m) y' with p not dividing y' and 2m < n; 0 for odd valuation.
pub fn sqrt_count(p: u64, n: u32, y: u64) -> u64 {
    debug_assert!(p % 2 == 1 && is_prime(p) && n >= 1);
    let q = pow_u64(p, n);
    debug_assert!(y < q);
    if y == 0 {
        return pow_u64(p, n / 2);
    }
    let mut v = 0u32;
    let mut y1 = y;
    while y1 % p == 0 {
        y1 /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return 0;
    }
    let m = v / 2;
    match quad_char(y1 as i128, p) {
        1 => 2 * pow_u64(p, m),
        _ => 0,
    }
}

/// Number of pairs (b, c) mod p^n with 4bc = y, for odd prime p.
///
/// Equals (m+1) phi(p^n) when y has valuation m < n, and
/// n phi(p^n) + p^n when y = 0.
pub fn bc_pair_count(p: u64, n: u32, y: u64) -> u64 {
    debug_assert!(p % 2 == 1 && is_prime(p) && n >= 1);
    let q = pow_u64(p, n);
    debug_assert!(y < q);
    let phi = q - q / p;
    if y == 0 {
        return n as u64 * phi + q;
    }
    let mut v = 0u64;
    let mut y1 = y;
    while y1 % p == 0 {
        y1 /= p;
        v += 1;
    }
    (v + 1) * phi
}

/// Number of integral ideals of norm m in the ring of integers of Q(sqrt(D)).
///
/// Split primes contribute (e+1) choices at p^e, inert primes demand even
/// exponent, ramified primes contribute one choice. Always <= tau(m).
pub fn ideal_norm_count(d: i64, m: u64) -> Result<u64, ModArithError> {
    if d == 0 || d == 1 {
        return Err(ModArithError::BadField(d));
    }
    debug_assert!(squarefree_part(d as i128) == Ok(d as i128), "D must be squarefree");
    debug_assert!(m >= 1);
    // field discriminant: D for D = 1 mod 4, else 4D
    let disc: i64 = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let f = factorize(m as i128)?;
    let mut count = 1u64;
    for &(p, e) in &f.factors {
        if disc.rem_euclid(p as i64) == 0 {
            // ramified: single prime above p
            continue;
        }
        let split = if p == 2 {
            // 2 unramified means D = 1 mod 8 (split) or 5 mod 8 (inert)
            d.rem_euclid(8) == 1
        } else {
            quad_char(d as i128, p) == 1
        };
        if split {
            count *= e as u64 + 1;
        } else if e % 2 == 1 {
            return Ok(0);
        }
    }
    Ok(count)
}

/// omega, mu, tau, phi of a positive integer, read off one factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithFunctions {
    pub omega: u32,
    pub mobius: i32,
    pub tau: u64,
    pub phi: u64,
}

pub fn arith_functions(n: u64) -> ArithFunctions {
    debug_assert!(n >= 1);
    let f = factorize(n as i128).expect("n >= 1");
    let omega = f.factors.len() as u32;
    let squarefree = f.factors.iter().all(|&(_, e)| e == 1);
    let mobius = if !squarefree {
        0
    } else if omega % 2 == 0 {
        1
    } else {
        -1
    };
    let mut tau = 1u64;
    let mut phi = 1u64;
    for &(p, e) in &f.factors {
        tau *= e as u64 + 1;
        phi *= pow_u64(p, e - 1) * (p - 1);
    }
    ArithFunctions { omega, mobius, tau, phi }
}

/// omega on a nonzero integer, absolute-value convention.
pub fn omega_abs(n: i64) -> u32 {
    if n.unsigned_abs() <= 1 {
        return 0;
    }
    arith_functions(n.unsigned_abs()).omega
}
