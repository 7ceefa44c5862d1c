// SPDX-License-Identifier: Apache-2.0

//! Group-order primality tests: Lucas on `(ℤ/n)^×`, the Pell-conic test on
//! `C(ℤ/n)` (cyclic of order `n + 1` when `n` is prime and `(Δ/n) = −1`),
//! and Lucas–Lehmer as the special case `Δ = 12`, `P = (4, 1)`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::conic::{x_double, ConicPoint, PellConic};
use crate::error::{Error, Result};
use crate::nt;
use crate::ring::{BigZmod, Ring, Zmod};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Prime,
    Composite,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Base of the Lucas test.
    Base(u64),
    /// Point of the conic test.
    Point { delta: i64, x: u64, y: u64 },
    /// Final Lucas–Lehmer residue `s_{p−2} mod M_p`.
    Residue(BigUint),
    /// `n` failed a square-root consistency check that holds modulo primes.
    FailedSquareRoot { delta: i64, x: u64 },
    /// `n` is a perfect square.
    SquareRoot(u64),
}

/// One evaluated condition of a test, e.g. `"(n+1)/3·P ≠ N"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalityOutcome {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub checks: Vec<Check>,
}

impl PrimalityOutcome {
    fn new(witness: Option<Witness>, checks: Vec<Check>) -> Self {
        let verdict = match checks.first() {
            Some(c) if !c.holds => Verdict::Composite,
            Some(_) if checks.iter().all(|c| c.holds) => Verdict::Prime,
            _ => Verdict::Inconclusive,
        };
        PrimalityOutcome { verdict, witness, checks }
    }

    pub fn is_prime(&self) -> bool {
        self.verdict == Verdict::Prime
    }
}

/// Conic discriminants tried first by [`pell_prove`].
pub const DEFAULT_DISCRIMINANTS: [i64; 8] = [5, 8, 12, 13, 17, 21, 24, 28];
/// Candidate points tested before giving up; x-values with no point on
/// the conic do not count.
pub const MAX_WITNESS_ATTEMPTS: usize = 50;
/// Largest discriminant scanned when the defaults all have `(Δ/n) ≠ −1`.
pub const MAX_FALLBACK_DISCRIMINANT: i64 = 10_000;

/// Checks that `primes` are exactly the prime divisors of `m`.
fn check_factorization(m: u64, n: u64, primes: &[u64]) -> Result<()> {
    let incomplete = |reason: String| Error::IncompleteFactorization { n, reason };
    let mut rest = m;
    for &q in primes {
        if !nt::is_prime(q) {
            return Err(incomplete(format!("{q} is not prime")));
        }
        if rest % q != 0 {
            return Err(incomplete(format!("{q} does not divide {m}")));
        }
        while rest % q == 0 {
            rest /= q;
        }
    }
    if rest != 1 {
        return Err(incomplete(format!("cofactor {rest} of {m} not covered")));
    }
    Ok(())
}

/// Lucas: `n` is prime iff some `a` has `a^{n−1} ≡ 1` and
/// `a^{(n−1)/r} ≢ 1` for every prime `r | n − 1`.
pub fn lucas_test(n: u64, a: u64, factors: &[u64]) -> Result<PrimalityOutcome> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Precondition(format!("n = {n} must be odd and at least 3")));
    }
    check_factorization(n - 1, n, factors)?;
    let mut checks = vec![Check {
        name: format!("{a}^(n-1) = 1 mod n"),
        holds: nt::pow_mod(a, n - 1, n) == 1,
    }];
    if checks[0].holds {
        checks.extend(factors.iter().map(|&r| Check {
            name: format!("{a}^((n-1)/{r}) != 1 mod n"),
            holds: nt::pow_mod(a, (n - 1) / r, n) != 1,
        }));
    }
    Ok(PrimalityOutcome::new(Some(Witness::Base(a)), checks))
}

/// The conic test: with `(Δ/n) = −1`, `n` is prime iff some `P ∈ C(ℤ/n)`
/// has `(n+1)P = N` and `((n+1)/r)P ≠ N` for every prime `r | n + 1`.
pub fn pell_test(n: u64, conic: &PellConic, point: (u64, u64), factors: &[u64]) -> Result<PrimalityOutcome> {
    let delta = conic.delta();
    if n < 5 || n % 2 == 0 {
        return Err(Error::Precondition(format!("n = {n} must be odd and at least 5")));
    }
    if nt::gcd(n, delta.unsigned_abs()) != 1 {
        return Err(Error::Precondition(format!("gcd(n, 2Δ) ≠ 1 for n = {n}, Δ = {delta}")));
    }
    if nt::kronecker(delta, n) != -1 {
        return Err(Error::Precondition(format!("(Δ/n) ≠ −1 for n = {n}, Δ = {delta}")));
    }
    check_factorization(n + 1, n, factors)?;
    let ring = Zmod::new(n)?;
    let p = conic.point(&ring, point.0 % n, point.1 % n)?;
    let neutral = conic.neutral(&ring);
    let order = (n + 1) as i128;
    let mut checks = vec![Check {
        name: "(n+1)P = N".into(),
        holds: conic.scalar_mul(&ring, order, &p) == neutral,
    }];
    if checks[0].holds {
        checks.extend(factors.iter().map(|&r| Check {
            name: format!("((n+1)/{r})P != N"),
            holds: conic.scalar_mul(&ring, order / r as i128, &p) != neutral,
        }));
    }
    let witness = Witness::Point { delta, x: p.x, y: p.y };
    Ok(PrimalityOutcome::new(Some(witness), checks))
}

/// First discriminant with `gcd(n, 2Δ) = 1` and `(Δ/n) = −1`: the defaults,
/// then fundamental discriminants in increasing order.
pub fn choose_discriminant(n: u64) -> Option<i64> {
    let usable = |d: i64| nt::gcd(n, d as u64) == 1 && nt::kronecker(d, n) == -1;
    DEFAULT_DISCRIMINANTS
        .into_iter()
        .chain((5..=MAX_FALLBACK_DISCRIMINANT).filter(|&d| nt::is_fundamental(d)))
        .find(|&d| usable(d))
}

/// Runs the conic test on `n` with a searched witness.
///
/// Candidates `x = 3, 4, …` (mod `n`) become points `(x, y)` with
/// `y² = (x² − 4)/Δ`; the smallest `x` whose point proves primality wins.
/// At most [`MAX_WITNESS_ATTEMPTS`] points are tested.
pub fn pell_prove(n: u64) -> Result<PrimalityOutcome> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::Precondition(format!("n = {n} must be odd and at least 5")));
    }
    let root = nt::isqrt(n);
    if root * root == n {
        let check = Check { name: "n is not a perfect square".into(), holds: false };
        return Ok(PrimalityOutcome::new(Some(Witness::SquareRoot(root)), vec![check]));
    }
    let Some(delta) = choose_discriminant(n) else {
        return Ok(PrimalityOutcome { verdict: Verdict::Inconclusive, witness: None, checks: vec![] });
    };
    let conic = PellConic::from_discriminant(delta)?;
    let factors: Vec<u64> = nt::factorize(n + 1)?.into_iter().map(|(q, _)| q).collect();
    let ring = Zmod::new(n)?;
    let delta_inv = ring.try_inv(ring.from_i64(delta)).map_err(|g| Error::Inconsistent(format!("gcd(n, Δ) = {g}")))?;
    let mut last = None;
    let mut attempts = 0;
    for step in 0..n {
        if attempts == MAX_WITNESS_ATTEMPTS {
            break;
        }
        let x = (3 + step) % n;
        let t = ring.mul(&ring.sub(&ring.square(&x), &ring.from_i64(4)), &delta_inv);
        let y = match nt::mod_sqrt(t, n) {
            Ok(Some(y)) => y,
            Ok(None) => continue,
            Err(Error::NotPrime(_)) => {
                let check = Check { name: format!("sqrt((x^2-4)/Δ) consistent at x = {x}"), holds: false };
                let witness = Witness::FailedSquareRoot { delta, x };
                return Ok(PrimalityOutcome::new(Some(witness), vec![check]));
            }
            Err(e) => return Err(e),
        };
        attempts += 1;
        let outcome = pell_test(n, &conic, (x, y), &factors)?;
        if outcome.verdict != Verdict::Inconclusive {
            return Ok(outcome);
        }
        last = Some(outcome);
    }
    Ok(last.unwrap_or(PrimalityOutcome { verdict: Verdict::Inconclusive, witness: None, checks: vec![] }))
}

/// Lucas–Lehmer for `M_p = 2^p − 1`: `s_0 = 4 = x(P)` on `X² − 12Y² = 4`,
/// `s_{k+1} = s_k² − 2` is x-only doubling, and `M_p` is prime iff
/// `s_{p−2} ≡ 0`.
pub fn lucas_lehmer(p: u32) -> Result<PrimalityOutcome> {
    if p < 3 || !nt::is_prime(p as u64) {
        return Err(Error::Precondition(format!("exponent {p} must be an odd prime")));
    }
    let m = (BigUint::from(1u8) << p) - 1u8;
    let ring = BigZmod::new(m)?;
    let mut s = ring.from_i64(4);
    for _ in 0..p - 2 {
        s = x_double(&ring, &s);
    }
    let check = Check { name: format!("s_{} = 0 mod M_{p}", p - 2), holds: s.is_zero() };
    // Composite is certain here: the sequence is deterministic.
    let verdict = if check.holds { Verdict::Prime } else { Verdict::Composite };
    Ok(PrimalityOutcome { verdict, witness: Some(Witness::Residue(s)), checks: vec![check] })
}

/// The conic point `(4, 1)` on `X² − 12Y² = 4` reduced mod `M_p`, for
/// comparing [`pell_test`] with [`lucas_lehmer`].
pub fn mersenne_point(p: u32) -> Result<(u64, ConicPoint<u64>)> {
    if p >= 63 {
        return Err(Error::OutOfRange(format!("M_{p} does not fit a machine word")));
    }
    Ok(((1u64 << p) - 1, ConicPoint::new(4, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(nt::pow_mod(3, 6, 7), 1);
        assert_eq!((nt::pow_mod(3, 3, 7), nt::pow_mod(3, 2, 7)), (6, 2));
        assert_eq!(lucas_test(7, 3, &[2, 3]).unwrap().verdict, Verdict::Prime);
        assert_eq!((nt::pow_mod(2, 340, 341), nt::pow_mod(2, 170, 341)), (1, 1));
        assert_eq!(lucas_test(341, 2, &[2, 5, 17]).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(nt::pow_mod(2, 14, 15), 4);
        assert_eq!(lucas_test(15, 2, &[2, 7]).unwrap().verdict, Verdict::Composite);
    }

    #[test]
    fn lucas_rejects_incomplete_factorizations() {
        assert!(matches!(lucas_test(7, 3, &[2]), Err(Error::IncompleteFactorization { .. })));
        assert!(matches!(lucas_test(7, 3, &[2, 3, 5]), Err(Error::IncompleteFactorization { .. })));
        assert!(matches!(lucas_test(13, 2, &[4, 3]), Err(Error::IncompleteFactorization { .. })));
    }

    #[test]
    fn pell_examples() {
        let c12 = PellConic::from_discriminant(12).unwrap();
        let r = Zmod::new(7).unwrap();
        let p = ConicPoint::new(4, 1);
        assert_eq!(c12.scalar_mul(&r, 8, &p), c12.neutral(&r));
        assert_ne!(c12.scalar_mul(&r, 4, &p), c12.neutral(&r));
        assert_eq!(pell_test(7, &c12, (4, 1), &[2]).unwrap().verdict, Verdict::Prime);

        let c13 = PellConic::from_discriminant(13).unwrap();
        assert_eq!(nt::kronecker(13, 11), -1);
        let r11 = Zmod::new(11).unwrap();
        let found = crate::modular::enumerate_points(&c13, &r11)
            .into_iter()
            .any(|q| pell_test(11, &c13, (q.x, q.y), &[2, 3]).unwrap().is_prime());
        assert!(found);
    }

    #[test]
    fn fifteen_never_passes() {
        let n = 15;
        for delta in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44] {
            if nt::gcd(n, delta as u64) != 1 || nt::kronecker(delta, n) != -1 {
                continue;
            }
            let c = PellConic::from_discriminant(delta).unwrap();
            let r = Zmod::new(n).unwrap();
            let pts = crate::modular::enumerate_points(&c, &r);
            assert!(!pts.is_empty());
            for q in pts {
                let v = pell_test(n, &c, (q.x, q.y), &[2]).unwrap().verdict;
                assert_ne!(v, Verdict::Prime, "Δ = {delta}, P = {q:?}");
            }
        }
    }

    #[test]
    fn pell_preconditions() {
        let c5 = PellConic::from_discriminant(5).unwrap();
        assert!(matches!(pell_test(15, &c5, (2, 0), &[2]), Err(Error::Precondition(_))));
        // (5/11) = +1
        assert!(matches!(pell_test(11, &c5, (2, 0), &[2, 3]), Err(Error::Precondition(_))));
        let c12 = PellConic::from_discriminant(12).unwrap();
        assert_eq!(pell_test(7, &c12, (4, 2), &[2]), Err(Error::NotOnCurve));
        assert!(matches!(pell_test(7, &c12, (4, 1), &[3]), Err(Error::IncompleteFactorization { .. })));
    }

    #[test]
    fn lucas_lehmer_examples() {
        let out = lucas_lehmer(3).unwrap();
        assert_eq!(out.verdict, Verdict::Prime);
        assert_eq!(14 % 7, 0);
        assert_eq!(lucas_lehmer(11).unwrap().verdict, Verdict::Composite);
        assert_eq!(2047, 23 * 89);
        assert_eq!(lucas_lehmer(13).unwrap().verdict, Verdict::Prime);
        assert!(trial_prime(8191));
        assert!(lucas_lehmer(4).is_err());
        assert_eq!(lucas_lehmer(127).unwrap().verdict, Verdict::Prime);
    }

    #[test]
    fn lucas_lehmer_is_the_conic_test() {
        let c12 = PellConic::from_discriminant(12).unwrap();
        for p in [3u32, 5, 7, 11, 13, 17, 19] {
            let (m, pt) = mersenne_point(p).unwrap();
            let conic = pell_test(m, &c12, (pt.x, pt.y), &[2]).unwrap().verdict;
            let ll = lucas_lehmer(p).unwrap().verdict;
            assert_eq!(conic, ll, "p = {p}");
            assert_eq!(ll == Verdict::Prime, trial_prime(m));
        }
    }

    #[test]
    fn x_only_doubling_matches_group_law() {
        let c = PellConic::from_discriminant(13).unwrap();
        let mut seen = 0;
        for n in [101u64, 1009, 7919] {
            let r = Zmod::new(n).unwrap();
            for q in crate::modular::enumerate_points(&c, &r).into_iter().take(500) {
                assert_eq!(c.double(&r, &q).x, x_double(&r, &q.x));
                seen += 1;
            }
        }
        assert!(seen >= 1000);
    }

    #[test]
    fn search_driver_small_range() {
        for n in (5..2000u64).step_by(2) {
            let v = pell_prove(n).unwrap().verdict;
            if trial_prime(n) {
                assert_eq!(v, Verdict::Prime, "n = {n}");
            } else {
                assert_ne!(v, Verdict::Prime, "n = {n}");
            }
        }
    }

    #[test]
    fn fallback_discriminant() {
        // 2, 3, 5, 7, 13, 17 are all squares mod 1511
        assert!(DEFAULT_DISCRIMINANTS.iter().all(|&d| nt::kronecker(d, 1511) != -1));
        let d = choose_discriminant(1511).unwrap();
        assert!(d > 28 && nt::kronecker(d, 1511) == -1);
        assert!(pell_prove(1511).unwrap().is_prime());
        assert_eq!(choose_discriminant(49), None);
    }
}
