//! Explicit enumeration of GL2(Z/nZ) and its distinguished subsets: trace
//! fibers, the prime-order locus Phi_n = { g : det(1-g) invertible }, and the
//! index-two kernel of the discriminant obstruction character.
//!
//! Matrices are stored as four residues with their level. Enumeration works
//! prime power by prime power and merges factors through the Chinese
//! remainder theorem, so composite levels never pay a per-candidate
//! invertibility check.

use crate::modarith::{self, chi4, chi8, factorize, quad_char};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gl2Error {
    #[error("level {level} has group order {order} exceeding the enumeration bound {bound}")]
    LevelTooLarge { level: u64, order: u128, bound: u64 },
    #[error("level must be at least 2, got {0}")]
    LevelTooSmall(u64),
    #[error("epsilon sign requires an even level, got {0}")]
    OddLevel(u32),
    #[error("psi is not defined at level {level} for squarefree discriminant {delta_sf}")]
    PsiUndefined { level: u32, delta_sf: i64 },
    #[error("slice with descriptor {0} does not split as a product over prime-power levels")]
    NotProductForm(String),
}

/// Default cap on |GL2(Z/nZ)| for explicit enumeration.
pub const DEFAULT_ENUM_BOUND: u64 = 100_000_000;

/// An invertible 2x2 matrix class `[[a, b], [c, d]]` over Z/nZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixClass {
    pub level: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl MatrixClass {
    pub fn new(level: u32, a: u32, b: u32, c: u32, d: u32) -> Self {
        debug_assert!(level >= 2);
        Self { level, a: a % level, b: b % level, c: c % level, d: d % level }
    }

    pub fn det(&self) -> u32 {
        let n = self.level as i64;
        let det = (self.a as i64 * self.d as i64 - self.b as i64 * self.c as i64).rem_euclid(n);
        det as u32
    }

    pub fn trace(&self) -> u32 {
        ((self.a as u64 + self.d as u64) % self.level as u64) as u32
    }

    /// det(1 - g) mod level.
    pub fn det_one_minus(&self) -> u32 {
        let n = self.level as i64;
        let v = ((1 - self.a as i64) * (1 - self.d as i64) - self.b as i64 * self.c as i64)
            .rem_euclid(n);
        v as u32
    }

    pub fn mul(&self, other: &MatrixClass) -> MatrixClass {
        debug_assert_eq!(self.level, other.level);
        let n = self.level as u64;
        let m = |x: u64| (x % n) as u32;
        MatrixClass {
            level: self.level,
            a: m(self.a as u64 * other.a as u64 + self.b as u64 * other.c as u64),
            b: m(self.a as u64 * other.b as u64 + self.b as u64 * other.d as u64),
            c: m(self.c as u64 * other.a as u64 + self.d as u64 * other.c as u64),
            d: m(self.c as u64 * other.b as u64 + self.d as u64 * other.d as u64),
        }
    }

    /// Reduction mod a divisor of the level.
    pub fn reduce(&self, m: u32) -> MatrixClass {
        debug_assert!(self.level % m == 0);
        MatrixClass { level: m, a: self.a % m, b: self.b % m, c: self.c % m, d: self.d % m }
    }

    pub fn is_invertible(&self) -> bool {
        modarith::gcd_u64(self.det() as u64, self.level as u64) == 1
    }
}

/// The defining predicate of a `GroupSlice`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceDescriptor {
    Full,
    TraceFiber(u32),
    Phi,
    /// Kernel of the obstruction character eps * (delta_sf / det).
    ObstructionKernel { delta_sf: i64 },
    /// Preimage of one sign under the full obstruction character.
    PsiPreimage { delta_sf: i64, sign: i8 },
}

impl std::fmt::Display for SliceDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SliceDescriptor::Full => write!(f, "full group"),
            SliceDescriptor::TraceFiber(r) => write!(f, "trace fiber {r}"),
            SliceDescriptor::Phi => write!(f, "Phi"),
            SliceDescriptor::ObstructionKernel { delta_sf } => {
                write!(f, "obstruction kernel for {delta_sf}")
            }
            SliceDescriptor::PsiPreimage { delta_sf, sign } => {
                write!(f, "psi preimage of {sign} for {delta_sf}")
            }
        }
    }
}

/// An explicitly enumerated subset of GL2(Z/nZ), members in canonical order.
#[derive(Debug, Clone)]
pub struct GroupSlice {
    pub level: u32,
    pub descriptor: SliceDescriptor,
    pub members: Vec<MatrixClass>,
}

impl GroupSlice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// |GL2(Z/nZ)| = n^4 prod_{p | n} (1 - 1/p)(1 - 1/p^2), by the closed form
/// p^(4k-3) (p - 1)(p^2 - 1) per prime power.
pub fn theoretical_order(n: u64) -> u128 {
    debug_assert!(n >= 1);
    if n == 1 {
        return 1;
    }
    let f = factorize(n as i128).expect("n >= 1");
    let mut order: u128 = 1;
    for &(p, k) in &f.factors {
        let p = p as u128;
        let mut q = 1u128;
        for _ in 0..(4 * k - 3) {
            q *= p;
        }
        order *= q * (p - 1) * (p * p - 1);
    }
    order
}

fn check_bound(n: u64, bound: u64) -> Result<(), Gl2Error> {
    if n < 2 {
        return Err(Gl2Error::LevelTooSmall(n));
    }
    let order = theoretical_order(n);
    if order > bound as u128 {
        return Err(Gl2Error::LevelTooLarge { level: n, order, bound });
    }
    Ok(())
}

/// All of GL2(Z/qZ) for a prime power q = p^k, by direct scan.
fn enumerate_prime_power(q: u32, p: u32) -> Vec<MatrixClass> {
    let mut members = Vec::with_capacity(theoretical_order(q as u64) as usize);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let det = (a as i64 * d as i64 - b as i64 * c as i64).rem_euclid(q as i64);
                    if det as u32 % p != 0 {
                        members.push(MatrixClass { level: q, a, b, c, d });
                    }
                }
            }
        }
    }
    members
}

/// CRT coefficients: idempotents e_i with e_i = 1 mod q_i, 0 mod q_j.
fn crt_basis(parts: &[u32]) -> (u64, Vec<u64>) {
    let n: u64 = parts.iter().map(|&q| q as u64).product();
    let basis = parts
        .iter()
        .map(|&q| {
            let m = n / q as u64;
            let inv = (1..q as u64)
                .find(|&t| m % q as u64 * t % q as u64 == 1)
                .expect("m invertible mod q");
            m * inv % n
        })
        .collect();
    (n, basis)
}

fn crt_merge(parts: &[u32], factors: &[Vec<MatrixClass>], descriptor: SliceDescriptor) -> GroupSlice {
    let (n, basis) = crt_basis(parts);
    let mut members = Vec::with_capacity(factors.iter().map(Vec::len).product());
    let mut index = vec![0usize; factors.len()];
    'outer: loop {
        let mut entry = [0u64; 4];
        for (i, f) in factors.iter().enumerate() {
            let g = &f[index[i]];
            entry[0] += g.a as u64 * basis[i] % n;
            entry[1] += g.b as u64 * basis[i] % n;
            entry[2] += g.c as u64 * basis[i] % n;
            entry[3] += g.d as u64 * basis[i] % n;
        }
        members.push(MatrixClass {
            level: n as u32,
            a: (entry[0] % n) as u32,
            b: (entry[1] % n) as u32,
            c: (entry[2] % n) as u32,
            d: (entry[3] % n) as u32,
        });
        for i in (0..index.len()).rev() {
            index[i] += 1;
            if index[i] < factors[i].len() {
                continue 'outer;
            }
            index[i] = 0;
        }
        break;
    }
    members.sort_unstable();
    GroupSlice { level: n as u32, descriptor, members }
}

fn prime_power_parts(n: u64) -> Vec<(u32, u32)> {
    factorize(n as i128)
        .expect("n >= 2")
        .factors
        .iter()
        .map(|&(p, k)| (p.pow(k) as u32, p as u32))
        .collect()
}

/// Enumerates GL2(Z/nZ) under the default size bound.
pub fn enumerate_group(n: u32) -> Result<GroupSlice, Gl2Error> {
    enumerate_group_bounded(n, DEFAULT_ENUM_BOUND)
}

pub fn enumerate_group_bounded(n: u32, bound: u64) -> Result<GroupSlice, Gl2Error> {
    check_bound(n as u64, bound)?;
    let parts = prime_power_parts(n as u64);
    let factors: Vec<Vec<MatrixClass>> =
        parts.iter().map(|&(q, p)| enumerate_prime_power(q, p)).collect();
    let qs: Vec<u32> = parts.iter().map(|&(q, _)| q).collect();
    Ok(crt_merge(&qs, &factors, SliceDescriptor::Full))
}

/// { g in GL2(Z/nZ) : tr g = r mod n }.
pub fn trace_fiber(n: u32, r: u32) -> Result<GroupSlice, Gl2Error> {
    trace_fiber_bounded(n, r, DEFAULT_ENUM_BOUND)
}

pub fn trace_fiber_bounded(n: u32, r: u32, bound: u64) -> Result<GroupSlice, Gl2Error> {
    let full = enumerate_group_bounded(n, bound)?;
    let r = r % n;
    let members = full.members.into_iter().filter(|g| g.trace() == r).collect();
    Ok(GroupSlice { level: n, descriptor: SliceDescriptor::TraceFiber(r), members })
}

/// Phi_n = { g : det(1 - g) invertible mod n }, the classes whose fixed
/// space is trivial; these are the Frobenius classes giving prime order.
pub fn phi_subset(n: u32) -> Result<GroupSlice, Gl2Error> {
    phi_subset_bounded(n, DEFAULT_ENUM_BOUND)
}

pub fn phi_subset_bounded(n: u32, bound: u64) -> Result<GroupSlice, Gl2Error> {
    check_bound(n as u64, bound)?;
    let parts = prime_power_parts(n as u64);
    let factors: Vec<Vec<MatrixClass>> = parts
        .iter()
        .map(|&(q, p)| {
            enumerate_prime_power(q, p)
                .into_iter()
                .filter(|g| g.det_one_minus() % p != 0)
                .collect()
        })
        .collect();
    let qs: Vec<u32> = parts.iter().map(|&(q, _)| q).collect();
    Ok(crt_merge(&qs, &factors, SliceDescriptor::Phi))
}

/// Sign of the permutation induced on the three nonzero vectors of F_2^2 by
/// the mod-2 reduction; +1 on even permutations under GL2(F_2) ~ S_3.
pub fn epsilon_sign(g: &MatrixClass) -> Result<i32, Gl2Error> {
    if g.level % 2 != 0 {
        return Err(Gl2Error::OddLevel(g.level));
    }
    let (a, b, c, d) = (g.a & 1, g.b & 1, g.c & 1, g.d & 1);
    let apply = |x: u32, y: u32| ((a * x + b * y) & 1, (c * x + d * y) & 1);
    // vectors (1,0), (0,1), (1,1) indexed 0, 1, 2
    let idx = |v: (u32, u32)| match v {
        (1, 0) => 0usize,
        (0, 1) => 1,
        (1, 1) => 2,
        _ => unreachable!("invertible matrix fixes no nonzero vector to zero"),
    };
    let perm = [idx(apply(1, 0)), idx(apply(0, 1)), idx(apply(1, 1))];
    // parity from cycle structure on three points
    let fixed = perm.iter().enumerate().filter(|&(i, &p)| i == p).count();
    Ok(match fixed {
        3 => 1,      // identity
        1 => -1,     // transposition
        0 => 1,      // 3-cycle
        _ => unreachable!("permutations of 3 points fix 0, 1 or 3 points"),
    })
}

/// The exponent k in the obstruction level 2^k * |W|:
/// 1, 2, 3 according to delta_sf = 1, 3, 2 mod 4.
pub fn two_part_exponent(delta_sf: i64) -> u32 {
    match delta_sf.rem_euclid(4) {
        1 => 1,
        3 => 2,
        2 => 3,
        _ => unreachable!("squarefree integers are not 0 mod 4"),
    }
}

/// The obstruction level: 2|d| when d = 1 mod 4, else 4|d|.
pub fn obstruction_level(delta_sf: i64) -> u64 {
    if delta_sf.rem_euclid(4) == 1 {
        2 * delta_sf.unsigned_abs()
    } else {
        4 * delta_sf.unsigned_abs()
    }
}

/// The local factor psi at a prime-power level, matching the five-case
/// table for the given squarefree discriminant:
/// Legendre of the determinant at odd primes, and epsilon twisted by
/// chi4/chi8 of the determinant at the 2-part.
pub fn psi_pk(g: &MatrixClass, delta_sf: i64) -> Result<i32, Gl2Error> {
    let level = g.level;
    let undefined = || Gl2Error::PsiUndefined { level, delta_sf };
    let f = factorize(level as i128).map_err(|_| undefined())?;
    if f.factors.len() != 1 {
        return Err(undefined());
    }
    let (p, k) = f.factors[0];
    let det = g.det() as i64;
    if p % 2 == 1 {
        if k != 1 {
            return Err(undefined());
        }
        return Ok(quad_char(det as i128, p));
    }
    let eps = epsilon_sign(g)?;
    match (level, delta_sf.rem_euclid(8)) {
        (2, r8) if r8 % 4 == 1 => Ok(eps),
        (4, r8) if r8 % 4 == 3 => Ok(chi4(det) * eps),
        (8, 2) => Ok(chi8(det) * eps),
        (8, 6) => Ok(chi4(det) * chi8(det) * eps),
        _ => Err(undefined()),
    }
}

/// The full obstruction character eps * (delta_sf / det) on GL2(Z/M_E Z),
/// evaluated as the product of the local psi factors. For delta_sf = 1 the
/// quadratic character is trivial and the product reduces to epsilon alone.
pub fn obstruction_character(g: &MatrixClass, delta_sf: i64) -> Result<i32, Gl2Error> {
    let m = obstruction_level(delta_sf);
    debug_assert_eq!(g.level as u64, m, "matrix level must equal the obstruction level");
    if delta_sf == 1 {
        return epsilon_sign(g);
    }
    let mut sign = 1;
    for (q, _) in prime_power_parts(m) {
        sign *= psi_pk(&g.reduce(q), delta_sf)?;
    }
    Ok(sign)
}

/// Kernel of the obstruction character at level M_E; an index-two subgroup.
pub fn kernel_subset(delta_sf: i64) -> Result<GroupSlice, Gl2Error> {
    kernel_subset_bounded(delta_sf, DEFAULT_ENUM_BOUND)
}

pub fn kernel_subset_bounded(delta_sf: i64, bound: u64) -> Result<GroupSlice, Gl2Error> {
    let m = obstruction_level(delta_sf);
    let full = enumerate_group_bounded(m as u32, bound)?;
    let members = full
        .members
        .into_iter()
        .filter(|g| obstruction_character(g, delta_sf).expect("level matches") == 1)
        .collect();
    Ok(GroupSlice {
        level: m as u32,
        descriptor: SliceDescriptor::ObstructionKernel { delta_sf },
        members,
    })
}

/// Preimage of one sign under the obstruction character, at level M_E.
pub fn psi_preimage(delta_sf: i64, sign: i8) -> Result<GroupSlice, Gl2Error> {
    let m = obstruction_level(delta_sf);
    let full = enumerate_group_bounded(m as u32, DEFAULT_ENUM_BOUND)?;
    let members = full
        .members
        .into_iter()
        .filter(|g| obstruction_character(g, delta_sf).expect("level matches") == sign as i32)
        .collect();
    Ok(GroupSlice {
        level: m as u32,
        descriptor: SliceDescriptor::PsiPreimage { delta_sf, sign },
        members,
    })
}

/// Splits a product-form slice into its prime-power projections, so that
/// sizes multiply. Trace fibers and sign conditions couple the factors and
/// are rejected; the full group and Phi split cleanly.
pub fn crt_split(slice: &GroupSlice) -> Result<Vec<GroupSlice>, Gl2Error> {
    let parts = prime_power_parts(slice.level as u64);
    let product_form = match slice.descriptor {
        SliceDescriptor::Full | SliceDescriptor::Phi => true,
        // a single prime-power factor splits trivially whatever the predicate
        _ => parts.len() == 1,
    };
    if !product_form {
        return Err(Gl2Error::NotProductForm(slice.descriptor.to_string()));
    }
    let mut out = Vec::new();
    for (q, _) in parts {
        let mut members: Vec<MatrixClass> = slice.members.iter().map(|g| g.reduce(q)).collect();
        members.sort_unstable();
        members.dedup();
        out.push(GroupSlice { level: q, descriptor: slice.descriptor, members });
    }
    debug_assert_eq!(
        out.iter().map(GroupSlice::len).product::<usize>(),
        slice.len(),
        "projections of a product-form slice must multiply back"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::kronecker_odd;

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_group(2).unwrap().len(), 6);
        assert_eq!(enumerate_group(3).unwrap().len(), 48);
        assert_eq!(enumerate_group(6).unwrap().len(), 288);
    }

    #[test]
    fn order_matches_enumeration_up_to_24() {
        for n in 2u32..=24 {
            let slice = enumerate_group(n).unwrap();
            assert_eq!(slice.len() as u128, theoretical_order(n as u64), "n={n}");
            // each member once, all invertible
            assert!(slice.members.windows(2).all(|w| w[0] < w[1]));
            assert!(slice.members.iter().all(MatrixClass::is_invertible));
        }
    }

    #[test]
    fn closure_on_sampled_pairs() {
        for n in [4u32, 6, 9, 12] {
            let slice = enumerate_group(n).unwrap();
            let step = (slice.len() / 17).max(1);
            for i in (0..slice.len()).step_by(step) {
                for j in (0..slice.len()).step_by(step * 3 + 1) {
                    let prod = slice.members[i].mul(&slice.members[j]);
                    assert!(slice.members.binary_search(&prod).is_ok(), "closure at n={n}");
                }
            }
        }
    }

    #[test]
    fn bound_rejection_reports_size() {
        let err = enumerate_group_bounded(60, 1000).unwrap_err();
        match err {
            Gl2Error::LevelTooLarge { level, order, bound } => {
                assert_eq!(level, 60);
                assert_eq!(order, theoretical_order(60));
                assert_eq!(bound, 1000);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn trace_fiber_sizes() {
        assert_eq!(trace_fiber(2, 0).unwrap().len(), 4);
        assert_eq!(trace_fiber(2, 1).unwrap().len(), 2);
        assert_eq!(trace_fiber(3, 1).unwrap().len(), 15);
    }

    #[test]
    fn trace_fibers_partition_group() {
        for n in 2u32..=12 {
            let total: usize = (0..n).map(|r| trace_fiber(n, r).unwrap().len()).sum();
            assert_eq!(total as u128, theoretical_order(n as u64), "n={n}");
        }
    }

    #[test]
    fn phi_sizes() {
        assert_eq!(phi_subset(2).unwrap().len(), 2);
        assert_eq!(phi_subset(3).unwrap().len(), 27);
        assert_eq!(phi_subset(6).unwrap().len(), 54);
        // odd-prime closed form p(p^3 - 2p^2 - p + 3) at p = 3
        assert_eq!(27, 3 * (27 - 18 - 3 + 3));
    }

    #[test]
    fn phi_matches_definition() {
        for n in [2u32, 3, 4, 6, 8, 12] {
            let full = enumerate_group(n).unwrap();
            let brute: Vec<MatrixClass> = full
                .members
                .iter()
                .copied()
                .filter(|g| modarith::gcd_u64(g.det_one_minus() as u64, n as u64) == 1)
                .collect();
            assert_eq!(phi_subset(n).unwrap().members, brute, "n={n}");
        }
    }

    #[test]
    fn epsilon_examples() {
        let id = MatrixClass::new(2, 1, 0, 0, 1);
        assert_eq!(epsilon_sign(&id).unwrap(), 1);
        let swap = MatrixClass::new(2, 0, 1, 1, 0);
        assert_eq!(epsilon_sign(&swap).unwrap(), -1);
        let cycle = MatrixClass::new(2, 0, 1, 1, 1);
        assert_eq!(epsilon_sign(&cycle).unwrap(), 1);
        let odd = MatrixClass::new(3, 1, 0, 0, 1);
        assert_eq!(epsilon_sign(&odd), Err(Gl2Error::OddLevel(3)));
    }

    #[test]
    fn epsilon_is_a_character() {
        let g6 = enumerate_group(6).unwrap();
        let step = 13;
        for i in (0..g6.len()).step_by(step) {
            for j in (0..g6.len()).step_by(step + 4) {
                let x = &g6.members[i];
                let y = &g6.members[j];
                assert_eq!(
                    epsilon_sign(&x.mul(y)).unwrap(),
                    epsilon_sign(x).unwrap() * epsilon_sign(y).unwrap()
                );
            }
        }
    }

    #[test]
    fn psi_examples() {
        // odd p, square determinant
        let g = MatrixClass::new(5, 2, 0, 0, 2); // det 4
        assert_eq!(psi_pk(&g, -3).unwrap(), 1);
        // level 2, delta_sf = 1 mod 4, 3-cycle
        let g = MatrixClass::new(2, 0, 1, 1, 1);
        assert_eq!(psi_pk(&g, -3).unwrap(), 1);
        // level 4, delta_sf = 3 mod 4, identity
        let g = MatrixClass::new(4, 1, 0, 0, 1);
        assert_eq!(psi_pk(&g, 3).unwrap(), 1);
        // mismatched table entries rejected
        let g = MatrixClass::new(4, 1, 0, 0, 1);
        assert!(matches!(psi_pk(&g, -3), Err(Gl2Error::PsiUndefined { .. })));
        let g = MatrixClass::new(9, 1, 0, 0, 1);
        assert!(matches!(psi_pk(&g, -3), Err(Gl2Error::PsiUndefined { .. })));
    }

    #[test]
    fn kernel_sizes() {
        assert_eq!(kernel_subset(-3).unwrap().len(), 144);
        assert_eq!(kernel_subset(-1).unwrap().len(), 48);
        let k1 = kernel_subset(1).unwrap();
        assert_eq!(k1.len(), 3);
        // A_3 inside GL2(F_2): identity and the two 3-cycles
        assert!(k1.members.iter().all(|g| epsilon_sign(g).unwrap() == 1));
    }

    #[test]
    fn kernel_has_index_two_and_is_closed() {
        for delta_sf in [-3i64, 5, -1, 3, 2, -2, 6, 1] {
            let ker = kernel_subset(delta_sf).unwrap();
            let m = obstruction_level(delta_sf);
            assert_eq!(ker.len() as u128 * 2, theoretical_order(m), "delta_sf={delta_sf}");
            let step = (ker.len() / 11).max(1);
            for i in (0..ker.len()).step_by(step) {
                for j in (0..ker.len()).step_by(step * 2 + 1) {
                    let prod = ker.members[i].mul(&ker.members[j]);
                    assert!(ker.members.binary_search(&prod).is_ok());
                }
            }
        }
    }

    #[test]
    fn psi_product_equals_epsilon_times_kronecker() {
        // the local-factor product against an independent Kronecker symbol
        for delta_sf in [-3i64, 5, -1, 3, 2, -2, 6] {
            let m = obstruction_level(delta_sf);
            let full = enumerate_group(m as u32).unwrap();
            for g in &full.members {
                let lhs = obstruction_character(g, delta_sf).unwrap();
                let det = g.det() as i64; // odd since the level is even
                let rhs = epsilon_sign(g).unwrap() * kronecker_odd(delta_sf, det as u64);
                assert_eq!(lhs, rhs, "delta_sf={delta_sf} g={g:?}");
            }
        }
    }

    #[test]
    fn phi_contained_in_even_classes() {
        // containment only: at level 2 the identity is even but det(1-1) = 0
        for n in [2u32, 4, 6, 8, 12, 16, 24] {
            let phi = phi_subset(n).unwrap();
            assert!(phi.members.iter().all(|g| epsilon_sign(g).unwrap() == 1), "n={n}");
        }
        let even_classes = enumerate_group(2)
            .unwrap()
            .members
            .iter()
            .filter(|g| epsilon_sign(g).unwrap() == 1)
            .count();
        assert_eq!(even_classes, 3);
        assert_eq!(phi_subset(2).unwrap().len(), 2); // proper containment at level 2
    }

    #[test]
    fn crt_split_examples() {
        let phi6 = phi_subset(6).unwrap();
        let parts = crt_split(&phi6).unwrap();
        let sizes: Vec<usize> = parts.iter().map(GroupSlice::len).collect();
        assert_eq!(sizes, vec![2, 27]);

        let full6 = enumerate_group(6).unwrap();
        let parts = crt_split(&full6).unwrap();
        let sizes: Vec<usize> = parts.iter().map(GroupSlice::len).collect();
        assert_eq!(sizes, vec![6, 48]);

        let fiber = trace_fiber(6, 1).unwrap();
        assert!(matches!(crt_split(&fiber), Err(Gl2Error::NotProductForm(_))));
    }
}
