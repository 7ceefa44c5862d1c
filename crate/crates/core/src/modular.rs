// SPDX-License-Identifier: Apache-2.0

//! Points of Pell conics over finite rings: enumeration, group structure and
//! local zeta functions.

use std::collections::{HashMap, HashSet};

use crate::abelian::AbelianInvariants;
use crate::conic::{ConicPoint, PellConic};
use crate::error::{Error, Result};
use crate::nt;
use crate::ring::{FiniteRing, Gf, Ring, Zmod};

/// All affine solutions of `x² − Δy² = 4` over the ring, without duplicates.
pub fn enumerate_points<R: FiniteRing>(conic: &PellConic, ring: &R) -> Vec<ConicPoint<R::Elem>> {
    let elems = ring.elements();
    let mut roots: HashMap<R::Elem, Vec<R::Elem>> = HashMap::new();
    for x in &elems {
        roots.entry(ring.square(x)).or_default().push(x.clone());
    }
    let delta = ring.from_i64(conic.delta());
    let four = ring.from_i64(4);
    let mut out = Vec::new();
    for y in &elems {
        let target = ring.add(&four, &ring.mul(&delta, &ring.square(y)));
        if let Some(xs) = roots.get(&target) {
            out.extend(xs.iter().map(|x| ConicPoint::new(x.clone(), y.clone())));
        }
    }
    out
}

/// `#C(F_q) = q − (Δ/p)^f` for `q = p^f` and `p ∤ 2Δ`.
pub fn count_points(conic: &PellConic, p: u64, f: u32) -> Result<u64> {
    if p < 3 || !nt::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    if conic.delta() % p as i64 == 0 {
        return Err(Error::Precondition(format!("{p} divides Δ = {}; enumerate instead", conic.delta())));
    }
    let q = p.checked_pow(f).ok_or_else(|| Error::OutOfRange(format!("{p}^{f}")))?;
    let chi = nt::kronecker(conic.delta(), p);
    let chi_f = if chi == -1 && f % 2 == 1 { -1 } else { 1 };
    Ok((q as i64 - chi_f) as u64)
}

/// Invariant factors of a finite point set under the group law.
///
/// Fails if the set is not closed under addition or misses the neutral
/// element.
pub fn abelian_invariants<R: Ring>(
    conic: &PellConic,
    ring: &R,
    points: &[ConicPoint<R::Elem>],
) -> Result<AbelianInvariants> {
    let set: HashSet<&ConicPoint<R::Elem>> = points.iter().collect();
    if set.len() != points.len() {
        return Err(Error::NotAGroup("duplicate points".into()));
    }
    let neutral = conic.neutral(ring);
    if !set.contains(&neutral) {
        return Err(Error::NotAGroup("neutral element missing".into()));
    }
    for a in points {
        for b in points {
            if !set.contains(&conic.add(ring, a, b)) {
                return Err(Error::NotAGroup("not closed under addition".into()));
            }
        }
    }
    let orders: Vec<u64> = points.iter().map(|p| element_order(conic, ring, p, points.len() as u64)).collect::<Result<_>>()?;
    AbelianInvariants::from_element_orders(&orders)
}

fn element_order<R: Ring>(conic: &PellConic, ring: &R, p: &ConicPoint<R::Elem>, bound: u64) -> Result<u64> {
    let neutral = conic.neutral(ring);
    let mut acc = p.clone();
    let mut k = 1;
    while acc != neutral {
        if k > bound {
            return Err(Error::NotAGroup("element of unbounded order".into()));
        }
        acc = conic.add(ring, &acc, p);
        k += 1;
    }
    Ok(k)
}

/// Structure of `C(ℤ/p^k)` for an odd prime `p` from the closed-form table:
/// `ℤ/(p − (Δ/p)) ⊕ ℤ/p^{k−1}` when `p ∤ Δ`, `ℤ/2 ⊕ ℤ/p^k` when `p | Δ ≠ −3`,
/// and `ℤ/6 ⊕ ℤ/3^{k−1}` for `p = 3, Δ = −3`.
pub fn structure_mod_pk(conic: &PellConic, p: u64, k: u32) -> Result<AbelianInvariants> {
    if p == 2 {
        return Err(Error::Precondition("p = 2 is not supported".into()));
    }
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let delta = conic.delta();
    let factors = if p == 3 && delta == -3 {
        [6, 3u64.pow(k - 1)]
    } else if delta % p as i64 == 0 {
        [2, p.pow(k)]
    } else {
        let chi = nt::kronecker(delta, p);
        [(p as i64 - chi as i64) as u64, p.pow(k - 1)]
    };
    AbelianInvariants::from_cyclic_factors(&factors)
}

/// Structure of `C(ℤ/p^k)` by brute-force enumeration.
pub fn structure_by_enumeration(conic: &PellConic, p: u64, k: u32) -> Result<AbelianInvariants> {
    let ring = Zmod::new(p.pow(k))?;
    let pts = enumerate_points(conic, &ring);
    abelian_invariants(conic, &ring, &pts)
}

/// `Z_p(T)` as a quotient of integer polynomials in `T`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalZeta {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
}

impl LocalZeta {
    /// The affine conic `X² − ΔY² = 4` over `F_p`, `p ∤ 2Δ`:
    /// `(1 − χ(p)T)/(1 − pT)`, so that `N_r = p^r − χ(p)^r`.
    pub fn pell(conic: &PellConic, p: u64) -> Result<Self> {
        if p < 3 || !nt::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not an odd prime")));
        }
        if conic.delta() % p as i64 == 0 {
            return Err(Error::Precondition(format!("{p} divides Δ = {}", conic.delta())));
        }
        let chi = nt::kronecker(conic.delta(), p) as i64;
        Ok(LocalZeta { numerator: vec![1, -chi], denominator: vec![1, -(p as i64)] })
    }

    /// The parabola `y = x²`: `1/(1 − pT)`.
    pub fn parabola(p: u64) -> Self {
        LocalZeta { numerator: vec![1], denominator: vec![1, -(p as i64)] }
    }

    /// `N_1, …, N_{r_max}` read off from `T·Z'(T)/Z(T) = Σ N_r T^r`.
    pub fn point_counts(&self, r_max: usize) -> Vec<i128> {
        let num = log_derivative(&self.numerator, r_max);
        let den = log_derivative(&self.denominator, r_max);
        (1..=r_max).map(|r| num[r] - den[r]).collect()
    }
}

/// Coefficients of `T·A'(T)/A(T)` up to `T^n`, for `A(0) = 1`.
fn log_derivative(a: &[i64], n: usize) -> Vec<i128> {
    assert_eq!(a.first(), Some(&1), "constant term must be 1");
    let coeff = |i: usize| a.get(i).copied().unwrap_or(0) as i128;
    let mut c = vec![0i128; n + 1];
    for m in 1..=n {
        let mut v = m as i128 * coeff(m);
        for i in 1..m {
            v -= coeff(i) * c[m - i];
        }
        c[m] = v;
    }
    c
}

/// Number of affine points over `F_{p^r}`, counted by enumeration.
pub fn enumerate_count(conic: &PellConic, p: u64, r: usize) -> Result<u64> {
    let field = Gf::new(p, r)?;
    Ok(enumerate_points(conic, &field).len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic(delta: i64) -> PellConic {
        PellConic::from_discriminant(delta).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let c = conic(5);
        let pts = enumerate_points(&c, &Zmod::new(3).unwrap());
        let mut got: Vec<(u64, u64)> = pts.iter().map(|p| (p.x, p.y)).collect();
        got.sort();
        assert_eq!(got, vec![(0, 1), (0, 2), (1, 0), (2, 0)]);
        assert_eq!(enumerate_points(&c, &Zmod::new(11).unwrap()).len(), 10);
        assert_eq!(enumerate_points(&c, &Gf::new(3, 2).unwrap()).len(), 8);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for delta in [5, 12, -3, 40] {
            let c = conic(delta);
            for n in [9u64, 15, 21, 25] {
                let r = Zmod::new(n).unwrap();
                let mut brute = Vec::new();
                for x in 0..n {
                    for y in 0..n {
                        if c.on_curve(&r, &ConicPoint::new(x, y)) {
                            brute.push((x, y));
                        }
                    }
                }
                let mut got: Vec<_> = enumerate_points(&c, &r).iter().map(|p| (p.x, p.y)).collect();
                got.sort();
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn counting_formula() {
        let c = conic(5);
        assert_eq!(count_points(&c, 3, 1), Ok(4));
        assert_eq!(count_points(&c, 11, 1), Ok(10));
        assert_eq!(count_points(&c, 3, 2), Ok(8));
        assert!(count_points(&c, 5, 1).is_err());
    }

    #[test]
    fn counts_agree_with_enumeration() {
        for delta in [5i64, 8, 12, 13, 40, -4, -3, -8] {
            let c = conic(delta);
            for p in nt::primes_up_to(50).into_iter().filter(|&p| p > 2 && delta % p as i64 != 0) {
                for f in 1..=2u32 {
                    let n = enumerate_count(&c, p, f as usize).unwrap();
                    assert_eq!(count_points(&c, p, f).unwrap(), n, "Δ = {delta}, q = {p}^{f}");
                }
            }
        }
    }

    #[test]
    fn invariants_examples() {
        let c = conic(5);
        let r3 = Zmod::new(3).unwrap();
        assert_eq!(abelian_invariants(&c, &r3, &enumerate_points(&c, &r3)).unwrap().factors(), &[4]);
        let r11 = Zmod::new(11).unwrap();
        assert_eq!(abelian_invariants(&c, &r11, &enumerate_points(&c, &r11)).unwrap().factors(), &[10]);
        let r9 = Zmod::new(9).unwrap();
        assert_eq!(abelian_invariants(&c, &r9, &enumerate_points(&c, &r9)).unwrap().factors(), &[12]);
    }

    #[test]
    fn invariants_reject_non_groups() {
        let c = conic(5);
        let r = Zmod::new(11).unwrap();
        let mut pts = enumerate_points(&c, &r);
        pts.retain(|p| !(p.x == 2 && p.y == 0));
        assert!(matches!(abelian_invariants(&c, &r, &pts), Err(Error::NotAGroup(_))));
        let pts = vec![c.neutral(&r), ConicPoint::new(3, 1)];
        assert!(matches!(abelian_invariants(&c, &r, &pts), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn table_examples() {
        assert_eq!(structure_mod_pk(&conic(5), 3, 2).unwrap().factors(), &[12]);
        assert_eq!(structure_mod_pk(&conic(5), 5, 1).unwrap().factors(), &[10]);
        assert_eq!(structure_mod_pk(&conic(-3), 3, 1).unwrap().factors(), &[6]);
        assert!(structure_mod_pk(&conic(5), 2, 1).is_err());
    }

    #[test]
    fn table_matches_enumeration() {
        for delta in [5i64, 8, 12, 13, 40, -4, -3, -8] {
            let c = conic(delta);
            for p in [3u64, 5, 7] {
                for k in 1..=3 {
                    assert_eq!(
                        structure_mod_pk(&c, p, k).unwrap(),
                        structure_by_enumeration(&c, p, k).unwrap(),
                        "Δ = {delta}, {p}^{k}"
                    );
                }
            }
        }
    }

    #[test]
    fn finite_field_groups_are_cyclic() {
        for delta in [5i64, 8, 12, 13, -4, -3] {
            let c = conic(delta);
            for p in [3u64, 5, 7, 11, 13] {
                if delta % p as i64 == 0 {
                    continue;
                }
                let r = Zmod::new(p).unwrap();
                assert!(abelian_invariants(&c, &r, &enumerate_points(&c, &r)).unwrap().is_cyclic());
            }
            for (p, f) in [(3u64, 2usize), (5, 2)] {
                if delta % p as i64 == 0 {
                    continue;
                }
                let k = Gf::new(p, f).unwrap();
                let inv = abelian_invariants(&c, &k, &enumerate_points(&c, &k)).unwrap();
                assert!(inv.is_cyclic(), "Δ = {delta}, F_{p}^{f}: {inv}");
            }
        }
    }

    #[test]
    fn zeta_examples() {
        let z = LocalZeta::pell(&conic(5), 3).unwrap();
        assert_eq!(z, LocalZeta { numerator: vec![1, 1], denominator: vec![1, -3] });
        assert_eq!(z.point_counts(2), vec![4, 8]);
        assert_eq!(LocalZeta::parabola(5), LocalZeta { numerator: vec![1], denominator: vec![1, -5] });
        assert_eq!(LocalZeta::parabola(5).point_counts(3), vec![5, 25, 125]);
        let z = LocalZeta::pell(&conic(5), 11).unwrap();
        assert_eq!(z.numerator, vec![1, -1]);
        assert_eq!(z.point_counts(1), vec![10]);
        assert!(LocalZeta::pell(&conic(5), 5).is_err());
    }

    #[test]
    fn zeta_reproduces_enumeration() {
        for p in [3u64, 7, 11] {
            let c = conic(5);
            let counts = LocalZeta::pell(&c, p).unwrap().point_counts(3);
            for r in 1..=3 {
                assert_eq!(counts[r - 1], enumerate_count(&c, p, r).unwrap() as i128, "p = {p}, r = {r}");
            }
        }
    }
}
