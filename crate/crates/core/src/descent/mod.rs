// SPDX-License-Identifier: Apache-2.0

//! First 2-descent on `C(ℤ)` for Δ > 0: the map `α : C → ℚ×/ℚ×²`, the
//! descendants `T_a : aX² − bY² = 4`, the Selmer group and `Sha₂`.

pub mod forms;
pub mod hilbert;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::conic::PellConic;
use crate::{IntPoint, RatPoint};
use crate::error::{Error, Result};
use crate::nt;
use crate::ring::Exact;

use self::forms::class_group_narrow;
use self::hilbert::{hilbert_symbol, relevant_places};

/// A class of `ℚ×/ℚ×²`, stored as its squarefree representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(i64);

impl SquareClass {
    pub fn new(n: i64) -> Result<Self> {
        Ok(SquareClass(nt::squarefree_part(n)?))
    }

    pub fn one() -> Self {
        SquareClass(1)
    }

    pub fn representative(&self) -> i64 {
        self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0 == 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let g = self.0.gcd(&other.0);
        SquareClass((self.0 / g) * (other.0 / g))
    }
}

impl std::fmt::Display for SquareClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The descendant `aX² − bY² = 4` with `ab = Δ`, `a > 0` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Descendant {
    pub a: i64,
    pub b: i64,
}

impl Descendant {
    pub fn new(delta: i64, a: i64) -> Result<Self> {
        if a <= 0 || !nt::is_squarefree(a) || delta % a != 0 {
            return Err(Error::Precondition(format!("{a} is not a positive squarefree divisor of {delta}")));
        }
        Ok(Descendant { a, b: delta / a })
    }

    pub fn delta(&self) -> i64 {
        self.a * self.b
    }

    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        BigInt::from(self.a) * x * x - BigInt::from(self.b) * y * y == BigInt::from(4)
    }
}

/// All descendants of Δ: one per positive squarefree divisor `a`.
pub fn descendants(delta: i64) -> Vec<Descendant> {
    let primes = nt::prime_divisors(delta);
    let mut out: Vec<Descendant> = (0u32..1 << primes.len())
        .map(|mask| {
            let a = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p as i64).product();
            Descendant { a, b: delta / a }
        })
        .collect();
    out.sort();
    out
}

/// The squarefree class of an integer all of whose prime factors of odd
/// multiplicity lie in `primes`; `None` if the remaining cofactor is not a square.
fn class_over(n: &BigInt, primes: &[u64]) -> Option<i64> {
    let mut m = n.abs();
    let mut rep: i64 = if n.is_negative() { -1 } else { 1 };
    for &p in primes {
        let p = BigInt::from(p);
        let mut odd = false;
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            m = q;
            odd = !odd;
        }
        if odd {
            rep *= p.to_i64()?;
        }
    }
    let root = m.sqrt();
    (&root * &root == m).then_some(rep)
}

/// The squarefree part of a big integer, by trial division below
/// [`nt::TRIAL_DIVISION_LIMIT`]; exact whenever the cofactor left after
/// trial division is below 10^18.
fn squarefree_part_big(n: &BigInt) -> Result<i64> {
    if n.is_zero() {
        return Err(Error::Zero);
    }
    let small: Vec<u64> = nt::primes_up_to(nt::TRIAL_DIVISION_LIMIT);
    let mut m = n.abs();
    let mut rep = BigInt::from(n.signum());
    for p in small {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut odd = false;
        while (&m % &bp).is_zero() {
            m /= &bp;
            odd = !odd;
        }
        if odd {
            rep *= &bp;
        }
    }
    let root = m.sqrt();
    if &root * &root != m {
        if m.bits() > 60 {
            return Err(Error::OutOfRange(format!("squarefree part of {n} beyond trial division")));
        }
        rep *= m;
    }
    rep.to_i64().ok_or_else(|| Error::OutOfRange(format!("squarefree part of {n} exceeds 64 bits")))
}

/// `α(x, y) = (x + 2)ℚ×²` for `x ≠ −2`, and `−Δℚ×²` at `(−2, 0)`.
///
/// Only primes dividing `2Δ` can occur to an odd power in `x + 2`, since
/// `(x + 2)(x − 2) = Δy²` and `gcd(x + 2, x − 2) | 4`.
pub fn alpha(conic: &PellConic, p: &IntPoint) -> SquareClass {
    let delta = conic.delta();
    let shifted: BigInt = &p.x + 2;
    if shifted.is_zero() {
        return SquareClass::new(-delta).expect("Δ ≠ 0");
    }
    let mut primes = nt::prime_divisors(delta);
    if delta % 2 != 0 {
        primes.insert(0, 2);
    }
    let rep = class_over(&shifted, &primes).expect("point lies on the conic");
    SquareClass(rep)
}

/// `α` on a rational point.
pub fn alpha_rational(conic: &PellConic, p: &RatPoint) -> Result<SquareClass> {
    if !conic.on_curve(&Exact::<BigRational>::new(), p) {
        return Err(Error::NotOnCurve);
    }
    let shifted = &p.x + BigRational::from_integer(2.into());
    if shifted.is_zero() {
        return SquareClass::new(-conic.delta());
    }
    SquareClass::new(squarefree_part_big(&(shifted.numer() * shifted.denom()))?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaImage {
    /// α on all of `C(ℤ)`.
    pub full: BTreeSet<SquareClass>,
    /// α on the points with `x > 0`, i.e. the subgroup generated by `η`.
    pub positive: BTreeSet<SquareClass>,
}

fn require_real(conic: &PellConic) -> Result<()> {
    if conic.delta() < 0 {
        return Err(Error::NonPositiveDiscriminant(conic.delta()));
    }
    Ok(())
}

/// The image of α, from the fundamental point `η` and the torsion point `(−2, 0)`.
pub fn image_alpha(conic: &PellConic) -> Result<AlphaImage> {
    require_real(conic)?;
    let eta = conic.fundamental_point()?;
    let positive: BTreeSet<SquareClass> = [SquareClass::one(), alpha(conic, &eta)].into();
    let minus = alpha(conic, &IntPoint::from((-2, 0)));
    let mut full = positive.clone();
    full.extend(positive.iter().map(|c| c.mul(&minus)));
    Ok(AlphaImage { full, positive })
}

/// The sample `{kη + T : |k| ≤ k_max, T torsion}` of `C(ℤ)`.
pub fn sample_points(conic: &PellConic, k_max: i128) -> Result<Vec<IntPoint>> {
    require_real(conic)?;
    let ring = Exact::<BigInt>::new();
    let eta = conic.fundamental_point()?;
    let mut out = Vec::new();
    for k in -k_max..=k_max {
        let q = conic.scalar_mul(&ring, k, &eta);
        for t in conic.torsion_points() {
            out.push(conic.add(&ring, &q, &t));
        }
    }
    Ok(out)
}

/// The image of α computed by applying α to [`sample_points`].
pub fn image_alpha_by_sampling(conic: &PellConic, k_max: i128) -> Result<AlphaImage> {
    let pts = sample_points(conic, k_max)?;
    let full = pts.iter().map(|p| alpha(conic, p)).collect();
    let positive = pts.iter().filter(|p| p.x.is_positive()).map(|p| alpha(conic, p)).collect();
    Ok(AlphaImage { full, positive })
}

/// Whether `T_a` has a rational point: `a` must be a local norm from
/// `ℚ(√Δ)` at every place, i.e. `(a, Δ)_v = 1` for `v ∈ {∞, 2} ∪ {p | Δ}`.
pub fn locally_solvable(t: &Descendant) -> bool {
    let delta = t.delta();
    relevant_places(t.a, delta).into_iter().all(|v| hilbert_symbol(t.a, delta, v) == 1)
}

fn is_subgroup(set: &BTreeSet<SquareClass>) -> bool {
    set.contains(&SquareClass::one()) && set.iter().all(|a| set.iter().all(|b| set.contains(&a.mul(b))))
}

/// The 2-Selmer group: classes of the locally solvable descendants.
pub fn selmer2(conic: &PellConic) -> Result<BTreeSet<SquareClass>> {
    require_real(conic)?;
    let sel: BTreeSet<SquareClass> =
        descendants(conic.delta()).into_iter().filter(locally_solvable).map(|t| SquareClass(t.a)).collect();
    if !is_subgroup(&sel) {
        return Err(Error::Inconsistent(format!("Selmer set {sel:?} is not a subgroup")));
    }
    Ok(sel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sha2 {
    pub order: u64,
    /// One Selmer class from each nontrivial coset of the image.
    pub representatives: Vec<SquareClass>,
}

fn sha_from(selmer: &BTreeSet<SquareClass>, image: &BTreeSet<SquareClass>) -> Result<Sha2> {
    if !image.is_subset(selmer) {
        return Err(Error::Inconsistent(format!("image {image:?} not inside Selmer {selmer:?}")));
    }
    let mut covered = image.clone();
    let mut representatives = Vec::new();
    for a in selmer {
        if !covered.contains(a) {
            representatives.push(*a);
            covered.extend(image.iter().map(|b| a.mul(b)));
        }
    }
    Ok(Sha2 { order: (selmer.len() / image.len()) as u64, representatives })
}

pub fn sha2(conic: &PellConic) -> Result<Sha2> {
    sha_from(&selmer2(conic)?, &image_alpha(conic)?.positive)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentReport {
    pub delta: i64,
    pub image_alpha_full: BTreeSet<SquareClass>,
    pub image_alpha_positive: BTreeSet<SquareClass>,
    pub selmer: BTreeSet<SquareClass>,
    pub sha2_order: u64,
    pub sha2_representatives: Vec<SquareClass>,
    pub rank: u32,
}

pub fn descent(conic: &PellConic) -> Result<DescentReport> {
    let image = image_alpha(conic)?;
    let selmer = selmer2(conic)?;
    let sha = sha_from(&selmer, &image.positive)?;
    Ok(DescentReport {
        delta: conic.delta(),
        rank: image.positive.len().trailing_zeros(),
        image_alpha_full: image.full,
        image_alpha_positive: image.positive,
        selmer,
        sha2_order: sha.order,
        sha2_representatives: sha.representatives,
    })
}

/// The three comparisons between descent and the narrow class group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Links {
    /// `#Sha₂ = #Cl⁺²[2]`.
    pub sha_is_class_group_torsion: bool,
    /// `∏_{p | Δ} 2 = 2·(Cl⁺ : Cl⁺²)`.
    pub genus_identity: bool,
    /// `#im α = 2` on the positive part.
    pub rank_one: bool,
}

impl Links {
    pub fn all(&self) -> bool {
        self.sha_is_class_group_torsion && self.genus_identity && self.rank_one
    }
}

pub fn verify_links(conic: &PellConic) -> Result<Links> {
    let report = descent(conic)?;
    let cl = class_group_narrow(conic.delta())?;
    let t = nt::prime_divisors(conic.delta()).len() as u32;
    Ok(Links {
        sha_is_class_group_torsion: report.sha2_order == cl.two_torsion_of_squares,
        genus_identity: 1u64 << t == 2 * (cl.h_plus / cl.squares_order),
        rank_one: report.image_alpha_positive.len() == 2,
    })
}

/// `(r, s)` with `x + 2 = a r²`, `x − 2 = b s²`, `y = r s` for an integral
/// point with `x > 0` and `α(P) = a`.
pub fn descendant_point(conic: &PellConic, p: &IntPoint) -> Result<(BigInt, BigInt)> {
    if !p.x.is_positive() {
        return Err(Error::Precondition("x must be positive".into()));
    }
    let a = alpha(conic, p).representative();
    let b = conic.delta() / a;
    let r2: BigInt = (&p.x + 2) / a;
    let r = r2.sqrt();
    let minus: BigInt = &p.x - 2;
    let s = if minus.is_zero() { BigInt::zero() } else { (&minus / b).sqrt() };
    // sign of s makes r s = y
    let s = if p.y.is_negative() != s.is_negative() && !s.is_zero() { -s } else { s };
    if BigInt::from(a) * &r * &r != &p.x + 2 || BigInt::from(b) * &s * &s != minus || &r * &s != p.y {
        return Err(Error::Inconsistent(format!("{p} does not lift to T_{a}")));
    }
    Ok((r, s))
}

impl std::ops::Mul for SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: Self) -> Self {
        SquareClass::mul(&self, &rhs)
    }
}
