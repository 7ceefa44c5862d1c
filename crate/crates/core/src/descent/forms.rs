// SPDX-License-Identifier: Apache-2.0

//! Binary quadratic forms `ax² + bxy + cy²` and narrow class groups by
//! exhaustive enumeration of reduced forms.

use std::collections::HashMap;

use num_integer::Integer;

use crate::abelian::AbelianInvariants;
use crate::error::{Error, Result};
use crate::nt;

/// Largest `|Δ|` accepted by [`ClassGroup::new`].
pub const MAX_CLASS_GROUP_DISCRIMINANT: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl std::fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    /// The form `(a, b, (b² − Δ)/4a)`.
    pub fn from_ab(a: i64, b: i64, delta: i64) -> Result<Self> {
        let num = b * b - delta;
        if a == 0 || num % (4 * a) != 0 {
            return Err(Error::Precondition(format!("no form ({a}, {b}, ·) of discriminant {delta}")));
        }
        Ok(QuadraticForm::new(a, b, num / (4 * a)))
    }

    /// The principal form `x² + bxy + cy²` with `b ∈ {0, 1}`.
    pub fn principal(delta: i64) -> Result<Self> {
        Self::from_ab(1, delta.rem_euclid(2), delta)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let delta = self.discriminant();
        if delta < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
        } else {
            // |√Δ − 2|a|| < b < √Δ with √Δ irrational
            let sq = nt::isqrt(delta as u64) as i64;
            let a2 = 2 * self.a.abs();
            0 < self.b && self.b <= sq && a2 + self.b > sq && a2 - self.b <= sq
        }
    }

    /// `ρ(a, b, c) = (c, b', ·)` with `b' ≡ −b (mod 2c)` normalized; on
    /// reduced indefinite forms, ρ permutes each proper class in a cycle.
    pub fn rho(&self) -> Self {
        let delta = self.discriminant();
        let sq = nt::isqrt(delta.max(0) as u64) as i64;
        let c = self.c;
        let m = 2 * c.abs();
        let b = if delta > 0 && c.abs() <= sq {
            sq - (sq + self.b).rem_euclid(m)
        } else {
            let r = (-self.b).rem_euclid(m);
            if r > c.abs() {
                r - m
            } else {
                r
            }
        };
        QuadraticForm::from_ab(c, b, delta).expect("ρ preserves the discriminant")
    }

    /// A reduced form properly equivalent to `self`.
    pub fn reduce(&self) -> Self {
        let delta = self.discriminant();
        if delta > 0 {
            let mut f = *self;
            while !f.is_reduced() {
                f = f.rho();
            }
            return f;
        }
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            if !(-a < b && b <= a) {
                let m = 2 * a;
                let mut r = b.rem_euclid(m);
                if r > a {
                    r -= m;
                }
                b = r;
                c = (b * b - delta) / (4 * a);
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return QuadraticForm::new(a, b, c);
        }
    }

    /// The properly equivalent form `(c, −b, a)`.
    pub fn swap(&self) -> Self {
        QuadraticForm::new(self.c, -self.b, self.a)
    }

    /// Dirichlet composition of two forms with positive leading
    /// coefficients and equal discriminant; the result is not reduced.
    pub fn compose(&self, other: &Self) -> Self {
        let delta = self.discriminant() as i128;
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - delta) / (4 * a3);
        QuadraticForm::new(a3 as i64, b3 as i64, c3 as i64)
    }
}

/// Invariants of the narrow class group `Cl⁺` of a discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupData {
    pub delta: i64,
    pub h_plus: u64,
    pub invariants: AbelianInvariants,
    pub squares_order: u64,
    pub two_torsion_of_squares: u64,
}

/// Proper equivalence classes of primitive forms of discriminant Δ
/// (positive definite when Δ < 0), with their group law.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    delta: i64,
    reps: Vec<QuadraticForm>,
    class_of_reduced: HashMap<QuadraticForm, usize>,
    identity: usize,
}

impl ClassGroup {
    pub fn new(delta: i64) -> Result<Self> {
        if !matches!(delta.rem_euclid(4), 0 | 1) {
            return Err(Error::NotDiscriminant(delta));
        }
        if delta >= 0 && nt::is_square(delta) {
            return Err(Error::SquareDiscriminant(delta));
        }
        if delta.abs() > MAX_CLASS_GROUP_DISCRIMINANT {
            return Err(Error::OutOfRange(format!("|Δ| = {} exceeds {MAX_CLASS_GROUP_DISCRIMINANT}", delta.abs())));
        }
        let reduced = reduced_forms(delta);
        let mut reps = Vec::new();
        let mut class_of_reduced = HashMap::new();
        for f in &reduced {
            if class_of_reduced.contains_key(f) {
                continue;
            }
            let id = reps.len();
            if delta < 0 {
                class_of_reduced.insert(*f, id);
                reps.push(*f);
                continue;
            }
            let mut g = *f;
            let mut rep = None;
            loop {
                class_of_reduced.insert(g, id);
                if rep.is_none() && g.a > 0 {
                    rep = Some(g);
                }
                g = g.rho();
                if g == *f {
                    break;
                }
            }
            reps.push(rep.expect("every cycle has a form with a > 0"));
        }
        let mut group = ClassGroup { delta, reps, class_of_reduced, identity: 0 };
        group.identity = group.class_of(&QuadraticForm::principal(delta)?)?;
        Ok(group)
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn representative(&self, class: usize) -> QuadraticForm {
        self.reps[class]
    }

    pub fn class_of(&self, f: &QuadraticForm) -> Result<usize> {
        if f.discriminant() != self.delta || !f.is_primitive() || (self.delta < 0 && f.a < 0) {
            return Err(Error::Precondition(format!("{f} is not a class of discriminant {}", self.delta)));
        }
        let r = f.reduce();
        self.class_of_reduced
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Inconsistent(format!("reduced form {r} missing from the enumeration")))
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let f = self.reps[i].compose(&self.reps[j]);
        self.class_of(&f).expect("composition stays in the group")
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut k = 1;
        let mut acc = i;
        while acc != self.identity {
            acc = self.mul(acc, i);
            k += 1;
        }
        k
    }

    /// The subgroup of squares, as sorted class indices.
    pub fn squares(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.order()).map(|i| self.mul(i, i)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn data(&self) -> Result<ClassGroupData> {
        let orders: Vec<u64> = (0..self.order()).map(|i| self.element_order(i)).collect();
        let invariants = AbelianInvariants::from_element_orders(&orders)?;
        Ok(ClassGroupData {
            delta: self.delta,
            h_plus: invariants.order(),
            squares_order: invariants.squares_order(),
            two_torsion_of_squares: invariants.two_torsion_of_squares(),
            invariants,
        })
    }
}

/// All primitive reduced forms of discriminant Δ (positive definite if Δ < 0).
pub fn reduced_forms(delta: i64) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    let parity = delta.rem_euclid(2);
    if delta < 0 {
        let mut a = 1;
        while 3 * a * a <= -delta {
            for b in (-a + 1)..=a {
                if b.rem_euclid(2) != parity {
                    continue;
                }
                if let Ok(f) = QuadraticForm::from_ab(a, b, delta) {
                    if f.is_reduced() && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
            a += 1;
        }
    } else {
        let sq = nt::isqrt(delta as u64) as i64;
        for b in (1..=sq).filter(|b| b.rem_euclid(2) == parity) {
            let ac = (delta - b * b) / 4;
            for a in (1..=ac).filter(|a| ac % a == 0) {
                for f in [QuadraticForm::new(a, b, -ac / a), QuadraticForm::new(-a, b, ac / a)] {
                    if f.is_reduced() && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

pub fn class_group_narrow(delta: i64) -> Result<ClassGroupData> {
    ClassGroup::new(delta)?.data()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(class_group_narrow(-4).unwrap().h_plus, 1);
        assert_eq!(class_group_narrow(40).unwrap().h_plus, 2);
        assert_eq!(class_group_narrow(5).unwrap().h_plus, 1);
        assert_eq!(class_group_narrow(-23).unwrap().h_plus, 3);
        assert_eq!(class_group_narrow(12).unwrap().h_plus, 2);
        assert_eq!(class_group_narrow(-84).unwrap().invariants.factors(), &[2, 2]);
        assert_eq!(reduced_forms(-4), vec![QuadraticForm::new(1, 0, 1)]);
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(class_group_narrow(0).is_err());
        assert!(class_group_narrow(1).is_err());
        assert!(class_group_narrow(9).is_err());
        assert!(class_group_narrow(7).is_err());
        assert!(matches!(class_group_narrow(10_008), Err(Error::OutOfRange(_))));
    }

    /// Number of `SL₂(ℤ)` classes of primitive definite forms by brute force:
    /// reduced forms in the wide sense `|b| ≤ a ≤ c`, merging `(a, ±a, c)` and `(a, ±b, a)`.
    fn definite_count(delta: i64) -> usize {
        let mut n = 0;
        for a in 1..=(-delta) {
            for b in -a..=a {
                let num = b * b - delta;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = QuadraticForm::new(a, b, c);
                if c >= a && f.is_primitive() && !(b < 0 && (b == -a || a == c)) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn definite_counts_match_brute_force() {
        for delta in (-1500i64..-2).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            assert_eq!(ClassGroup::new(delta).unwrap().order(), definite_count(delta), "Δ = {delta}");
        }
    }

    /// Proper equivalence of indefinite forms by searching for
    /// `γ ∈ SL₂(ℤ)` with small entries.
    fn equivalent(f: &QuadraticForm, g: &QuadraticForm, bound: i64) -> bool {
        for p in -bound..=bound {
            for r in -bound..=bound {
                if f.eval(p, r) != g.a {
                    continue;
                }
                for q in -bound..=bound {
                    for s in -bound..=bound {
                        if p * s - q * r != 1 {
                            continue;
                        }
                        let b = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s;
                        if b == g.b && f.eval(q, s) == g.c {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn cycles_are_distinct_classes() {
        for delta in [5i64, 8, 12, 13, 21, 24, 28, 40, 60, 65, 85] {
            let g = ClassGroup::new(delta).unwrap();
            for i in 0..g.order() {
                for j in 0..i {
                    assert!(!equivalent(&g.representative(i), &g.representative(j), 12), "Δ = {delta}");
                }
            }
        }
    }

    #[test]
    fn group_axioms() {
        for delta in [-4i64, -23, -84, -420, 12, 40, 60, 145, 229, 260, 1365] {
            let g = ClassGroup::new(delta).unwrap();
            let n = g.order();
            for i in 0..n {
                assert_eq!(g.mul(i, g.identity()), i);
                assert!((0..n).any(|j| g.mul(i, j) == g.identity()));
                for j in 0..n {
                    assert_eq!(g.mul(i, j), g.mul(j, i));
                    for k in 0..n.min(6) {
                        assert_eq!(g.mul(g.mul(i, j), k), g.mul(i, g.mul(j, k)), "Δ = {delta}");
                    }
                }
            }
        }
    }

    #[test]
    fn squares_from_invariants_match_direct_count() {
        for delta in (5..=1000).filter(|&d| nt::is_fundamental(d)) {
            let g = ClassGroup::new(delta).unwrap();
            let data = g.data().unwrap();
            let squares = g.squares();
            assert_eq!(data.squares_order, squares.len() as u64);
            let two_torsion = squares.iter().filter(|&&s| g.mul(s, s) == g.identity()).count();
            assert_eq!(data.two_torsion_of_squares, two_torsion as u64);
        }
    }

    #[test]
    fn genus_theory() {
        for delta in (-1000..=1000).filter(|&d| d != 1 && nt::is_fundamental(d)) {
            let data = class_group_narrow(delta).unwrap();
            let t = nt::prime_divisors(delta).len() as u32;
            assert_eq!(data.squares_order << (t - 1), data.h_plus, "Δ = {delta}");
        }
    }
}
