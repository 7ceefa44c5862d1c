// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{is_square, isqrt};
use crate::error::{Error, Result};

/// Minimal solutions of `x² − Δy² = ±4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fundamental4 {
    pub delta: i64,
    /// Smallest `(x1, y1)` with `y1 > 0` on `x² − Δy² = 4`.
    pub x1: BigInt,
    pub y1: BigInt,
    /// Smallest solution of `x² − Δy² = −4`, when one exists.
    pub minus4: Option<(BigInt, BigInt)>,
    /// 1 when the fundamental unit has norm +1, 0 otherwise.
    pub u: u8,
}

impl Fundamental4 {
    /// Coordinates of the fundamental unit `ε = (x + y√Δ)/2` of the order of
    /// discriminant Δ: the −4 solution if there is one.
    pub fn unit(&self) -> (&BigInt, &BigInt) {
        match &self.minus4 {
            Some((x, y)) => (x, y),
            None => (&self.x1, &self.y1),
        }
    }
}

/// Fundamental solutions of `x² − Δy² = ±4` for a positive non-square
/// discriminant.
///
/// Expands the reduced quadratic irrational `α = (P₀ + √Δ)/2`, `P₀ ≡ Δ mod 2`,
/// whose continued fraction is purely periodic. With period `k` and
/// convergent denominators `q_n`, `q_{k−1}·α + q_{k−2}` is the fundamental
/// unit of norm `(−1)^k`.
pub fn pell4_fundamental(delta: i64) -> Result<Fundamental4> {
    if delta <= 0 {
        return Err(Error::NonPositiveDiscriminant(delta));
    }
    if is_square(delta) {
        return Err(Error::SquareDiscriminant(delta));
    }
    if delta % 4 != 0 && delta % 4 != 1 {
        return Err(Error::NotDiscriminant(delta));
    }
    let root = isqrt(delta as u64) as i64;
    let p0 = if (root - delta) % 2 == 0 { root } else { root - 1 };

    let (mut p, mut q) = (p0, 2i64);
    let (mut den_prev, mut den) = (BigInt::one(), BigInt::zero());
    let mut period = 0usize;
    loop {
        let a = (p + root) / q;
        let next = &den * a + &den_prev;
        den_prev = std::mem::replace(&mut den, next);
        period += 1;
        p = a * q - p;
        q = (delta - p * p) / q;
        if p == p0 && q == 2 {
            break;
        }
    }
    // den = q_{k−1}, den_prev = q_{k−2}
    let x = &den * p0 + &den_prev * 2;
    let y = den;
    let norm = &x * &x - &y * &y * delta;
    let expected = if period % 2 == 0 { 4 } else { -4 };
    if norm != BigInt::from(expected) {
        return Err(Error::Inconsistent(format!(
            "continued fraction of Δ = {delta} produced norm {norm}"
        )));
    }
    Ok(if period % 2 == 0 {
        Fundamental4 { delta, x1: x, y1: y, minus4: None, u: 1 }
    } else {
        // square of the −4 unit: ((x² + Δy²)/2, xy)
        let x1 = (&x * &x + &y * &y * delta) / 2;
        let y1 = &x * &y;
        Fundamental4 { delta, x1, y1, minus4: Some((x, y)), u: 0 }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smallest y in 1..=limit with `c + Δy²` a perfect square.
    fn brute(delta: i64, c: i64, limit: i64) -> Option<(i64, i64)> {
        (1..=limit).find_map(|y| {
            let t = c as i128 + delta as i128 * (y as i128) * (y as i128);
            if t < 0 {
                return None;
            }
            let r = isqrt(t as u64) as i128;
            (r * r == t).then_some((r as i64, y))
        })
    }

    #[test]
    fn small_examples() {
        let f = pell4_fundamental(5).unwrap();
        assert_eq!((f.x1, f.y1), (3.into(), 1.into()));
        assert_eq!(f.minus4, Some((1.into(), 1.into())));
        assert_eq!(f.u, 0);

        let f = pell4_fundamental(12).unwrap();
        assert_eq!((f.x1, f.y1), (4.into(), 1.into()));
        assert_eq!(f.minus4, None);
        assert_eq!(f.u, 1);

        let f = pell4_fundamental(8).unwrap();
        assert_eq!((f.x1, f.y1), (6.into(), 2.into()));
        assert_eq!(f.minus4, Some((2.into(), 1.into())));
        assert_eq!(f.u, 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(pell4_fundamental(0), Err(Error::NonPositiveDiscriminant(0)));
        assert_eq!(pell4_fundamental(-4), Err(Error::NonPositiveDiscriminant(-4)));
        assert_eq!(pell4_fundamental(16), Err(Error::SquareDiscriminant(16)));
        assert_eq!(pell4_fundamental(7), Err(Error::NotDiscriminant(7)));
    }

    #[test]
    fn matches_exhaustive_search() {
        const LIMIT: i64 = 1_000_000;
        for delta in 5..=500i64 {
            if delta % 4 > 1 || is_square(delta) {
                continue;
            }
            let f = pell4_fundamental(delta).unwrap();
            match brute(delta, 4, LIMIT) {
                Some((x, y)) => assert_eq!((f.x1.clone(), f.y1.clone()), (x.into(), y.into()), "Δ = {delta}"),
                None => assert!(f.y1 > BigInt::from(LIMIT), "Δ = {delta}"),
            }
            match (brute(delta, -4, LIMIT), &f.minus4) {
                (Some((x, y)), Some(m)) => assert_eq!(m, &(x.into(), y.into()), "Δ = {delta}"),
                (None, Some(m)) => assert!(m.1 > BigInt::from(LIMIT), "Δ = {delta}"),
                (Some(_), None) => panic!("Δ = {delta}: missed a −4 solution"),
                (None, None) => {}
            }
        }
    }

    #[test]
    fn large_discriminant() {
        let f = pell4_fundamental(4 * 9949).unwrap();
        let n = &f.x1 * &f.x1 - &f.y1 * &f.y1 * (4 * 9949);
        assert_eq!(n, BigInt::from(4));
    }
}
