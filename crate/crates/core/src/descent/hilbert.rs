// SPDX-License-Identifier: Apache-2.0

//! Hilbert symbols `(a, b)_v` over the completions of ℚ.

use num_rational::Ratio;

use crate::nt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Splits `n = p^v · u` with `p ∤ u`.
fn split(n: i64, p: u64) -> (u32, i64) {
    let p = p as i64;
    let (mut v, mut u) = (0, n);
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// `(a, b)_v` for nonzero integers: `+1` iff `z² = ax² + by²` has a
/// nontrivial solution over `ℚ_v`.
///
/// Panics if `a` or `b` is zero, or if `v` is not a place.
pub fn hilbert_symbol(a: i64, b: i64, place: Place) -> i32 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    match place {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split(a, 2);
            let (beta, v) = split(b, 2);
            let eps = |w: i64| (w.rem_euclid(4) == 3) as u32;
            let omega = |w: i64| matches!(w.rem_euclid(8), 3 | 5) as u32;
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            assert!(nt::is_prime(p), "{p} is not a place");
            let (alpha, u) = split(a, p);
            let (beta, v) = split(b, p);
            let mut s = if alpha * beta % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= nt::kronecker(u, p);
            }
            if alpha % 2 == 1 {
                s *= nt::kronecker(v, p);
            }
            s
        }
    }
}

/// `(a, b)_v` for nonzero rationals; `n/d` and `n·d` share a square class.
pub fn hilbert_symbol_rational(a: Ratio<i64>, b: Ratio<i64>, place: Place) -> i32 {
    hilbert_symbol(a.numer() * a.denom(), b.numer() * b.denom(), place)
}

/// The places where `(a, b)_v` can be `−1`: `∞`, 2, and odd primes dividing `ab`.
pub fn relevant_places(a: i64, b: i64) -> Vec<Place> {
    let mut places = vec![Place::Infinity, Place::Prime(2)];
    let mut primes = nt::prime_divisors(a);
    primes.extend(nt::prime_divisors(b));
    primes.sort_unstable();
    primes.dedup();
    places.extend(primes.into_iter().filter(|&p| p != 2).map(Place::Prime));
    places
}
