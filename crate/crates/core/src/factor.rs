// SPDX-License-Identifier: Apache-2.0

//! Stage-1 group-order factoring: Pollard's p−1 on the hyperbola `xy = 1`
//! and the p±1 method on Pell conics.
//!
//! Both walk the primes `q ≤ B`, raising the running element to `q^e` with
//! `q^e ≤ B < q^{e+1}`, and take a gcd after every prime. When the gcd jumps
//! straight to `N`, the last prime is replayed one factor of `q` at a time.
//!
//! The conic method only tracks x-coordinates: the seed `x0` sits on
//! `X² − (x0² − 4)Y² = 4`, so modulo a prime `p` its order divides `p − 1`
//! or `p + 1` according to whether `x0² − 4` is a square mod `p`.

use crate::conic::{x_double, x_mul};
use crate::error::{Error, Result};
use crate::nt;
use crate::ring::Zmod;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorStatus {
    Found(u64),
    NoFactor,
    /// Every prime factor was caught at once; retry with another seed.
    TrivialGcd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorResult {
    pub status: FactorStatus,
    /// Prime powers applied before stopping.
    pub iterations: u32,
    pub bound: u64,
}

impl FactorResult {
    pub fn divisor(&self) -> Option<u64> {
        match self.status {
            FactorStatus::Found(g) => Some(g),
            _ => None,
        }
    }
}

/// Bases tried by [`p1_with_seeds`].
pub const P1_BASES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
/// Seeds `x0` tried by [`pell_with_seeds`]; each comes with `Δ = x0² − 4`.
pub const PELL_SEEDS: [u64; 10] = [3, 4, 5, 6, 8, 9, 11, 15, 17, 21];

fn check_modulus(n: u64) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Precondition(format!("N = {n} must be odd and greater than 1")));
    }
    Ok(())
}

fn classify(g: u64, n: u64) -> Option<FactorStatus> {
    match g {
        1 => None,
        g if g == n => Some(FactorStatus::TrivialGcd),
        g => Some(FactorStatus::Found(g)),
    }
}

/// Shared stage-1 driver. `step(v, q)` raises the group element to `q`,
/// `probe(v)` returns the gcd that detects the identity modulo a factor.
fn stage_one<V: Clone>(
    n: u64,
    bound: u64,
    mut value: V,
    step: impl Fn(&V, u64) -> V,
    probe: impl Fn(&V) -> u64,
) -> FactorResult {
    let mut iterations = 0;
    for q in nt::primes_up_to(bound) {
        let mut e = 1u32;
        while q.pow(e + 1) <= bound {
            e += 1;
        }
        let before = value.clone();
        value = step(&value, q.pow(e));
        iterations += 1;
        match classify(probe(&value), n) {
            None => continue,
            Some(FactorStatus::TrivialGcd) => {
                let mut v = before;
                for _ in 0..e {
                    v = step(&v, q);
                    if let Some(status) = classify(probe(&v), n) {
                        return FactorResult { status, iterations, bound };
                    }
                }
                unreachable!("replaying q^e must reach the same gcd");
            }
            Some(status) => return FactorResult { status, iterations, bound },
        }
    }
    FactorResult { status: FactorStatus::NoFactor, iterations, bound }
}

/// Pollard's p−1: `gcd(a^M − 1, N)` with `M = ∏_{q ≤ B} q^⌊log_q B⌋`.
pub fn pollard_p1(n: u64, bound: u64, base: u64) -> Result<FactorResult> {
    check_modulus(n)?;
    let g = nt::gcd(base % n, n);
    if g != 1 {
        let status = classify(g, n).unwrap_or(FactorStatus::TrivialGcd);
        return Ok(FactorResult { status, iterations: 0, bound });
    }
    Ok(stage_one(
        n,
        bound,
        base % n,
        |&v, e| nt::pow_mod(v, e, n),
        |&v| nt::gcd((v + n - 1) % n, n),
    ))
}

/// p±1 on a Pell conic: `gcd(x(M·P) − 2, N)` where `x(P) = x0`.
pub fn pell_pm1(n: u64, delta: i64, x0: u64, bound: u64) -> Result<FactorResult> {
    check_modulus(n)?;
    if delta == 0 || nt::gcd(delta.unsigned_abs() % n, n) != 1 {
        return Err(Error::Precondition(format!("gcd(N, 2Δ) ≠ 1 for N = {n}, Δ = {delta}")));
    }
    let ring = Zmod::new(n)?;
    let two = 2 % n;
    Ok(stage_one(
        n,
        bound,
        x0 % n,
        |v, e| {
            if e.is_power_of_two() {
                (0..e.trailing_zeros()).fold(*v, |acc, _| x_double(&ring, &acc))
            } else {
                x_mul(&ring, v, e as u128)
            }
        },
        |&v| nt::gcd((v + n - two) % n, n),
    ))
}

/// Runs [`pollard_p1`] over [`P1_BASES`] and keeps the smallest divisor.
pub fn p1_with_seeds(n: u64, bound: u64) -> Result<Option<u64>> {
    let mut best = None;
    for a in P1_BASES {
        if let Some(g) = pollard_p1(n, bound, a)?.divisor() {
            best = Some(best.map_or(g.min(n / g), |b: u64| b.min(g).min(n / g)));
        }
    }
    Ok(best)
}

/// Runs [`pell_pm1`] over [`PELL_SEEDS`] and keeps the smallest divisor.
/// Seeds whose `Δ` shares a factor with `N` are skipped.
pub fn pell_with_seeds(n: u64, bound: u64) -> Result<Option<u64>> {
    check_modulus(n)?;
    let mut best = None;
    for x0 in PELL_SEEDS {
        let delta = (x0 * x0 - 4) as i64;
        if nt::gcd(delta as u64, n) != 1 {
            continue;
        }
        if let Some(g) = pell_pm1(n, delta, x0, bound)?.divisor() {
            best = Some(best.map_or(g.min(n / g), |b: u64| b.min(g).min(n / g)));
        }
    }
    Ok(best)
}
