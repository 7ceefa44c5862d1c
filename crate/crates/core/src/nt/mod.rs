// SPDX-License-Identifier: Apache-2.0

//! Exact integer substrate: Kronecker symbols, squarefree parts, square roots
//! modulo primes, desk-scale factorization and the `x² − Δy² = ±4` solver.

mod pell;

pub use pell::{pell4_fundamental, Fundamental4};

use crate::error::{Error, Result};
use crate::factor;

/// Trial division runs up to this bound; larger cofactors go to p±1 splitting.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, or `Err(g)` with `g = gcd(a, n) > 1`.
pub fn inv_mod(a: u64, n: u64) -> std::result::Result<u64, u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(r0 as u64);
    }
    Ok(t0.rem_euclid(n as i128) as u64)
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt(n as u64);
        r * r == n as u64
    }
}

/// Kronecker symbol `(D/n)` for `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n ≥ 1");
    let mut n = n;
    if d % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    // (D/2) = 0, 1, 0, −1, 0, −1, 0, 1 indexed by D mod 8
    const TAB: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let mut k = if twos % 2 == 0 { 1 } else { TAB[(d & 7) as usize] };
    if n == 1 {
        return k;
    }
    // odd n: Jacobi symbol of (d mod n)
    let mut a = (d as i128).rem_euclid(n as i128) as u64;
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// Maps a squarefree `d ∉ {0, 1}` to the discriminant of `ℚ(√d)`.
pub fn discriminant_from(d: i64) -> Result<i64> {
    if d == 0 || d == 1 {
        return Err(Error::ExcludedRadicand(d));
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    Ok(if d.rem_euclid(4) == 1 { d } else { 4 * d })
}

/// Inverse of [`discriminant_from`]; fails unless `delta` is fundamental.
pub fn radicand_of(delta: i64) -> Result<i64> {
    let d = match delta.rem_euclid(4) {
        1 => delta,
        0 => delta / 4,
        _ => return Err(Error::NotDiscriminant(delta)),
    };
    match discriminant_from(d) {
        Ok(disc) if disc == delta => Ok(d),
        _ => Err(Error::NotFundamental(delta)),
    }
}

pub fn is_fundamental(delta: i64) -> bool {
    radicand_of(delta).is_ok()
}

/// Fundamental discriminants in `lo..=hi`, ascending.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|&d| is_fundamental(d)).collect()
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && squarefree_part(n).is_ok_and(|s| s == n)
}

/// The squarefree `s` with `n / s` a positive square.
pub fn squarefree_part(n: i64) -> Result<i64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut m = n.unsigned_abs();
    let mut s: u64 = 1;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                s *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    s *= m;
    Ok(if n < 0 { -(s as i64) } else { s as i64 })
}

/// Sorted distinct prime divisors of `n ≠ 0`.
pub fn prime_divisors(n: i64) -> Vec<u64> {
    let mut m = n.unsigned_abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

fn miller_rabin(n: u64) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // deterministic for all n < 2^64
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % n == 0 {
            continue;
        }
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

pub fn is_prime(n: u64) -> bool {
    if n < 1 << 32 {
        is_prime_trial(n)
    } else {
        n % 2 == 1 && miller_rabin(n)
    }
}

/// Prime factorization `[(p, e)]` in increasing order.
///
/// Trial division up to [`TRIAL_DIVISION_LIMIT`]; a composite cofactor left
/// over is split with the p±1 methods or rejected.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut m = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT && p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_cofactor(m, &mut rest)?;
        rest.sort_unstable();
        for q in rest {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    Ok(out)
}

fn split_cofactor(m: u64, out: &mut Vec<u64>) -> Result<()> {
    let limit_sq = TRIAL_DIVISION_LIMIT as u128 * TRIAL_DIVISION_LIMIT as u128;
    if (m as u128) < limit_sq || is_prime(m) {
        out.push(m);
        return Ok(());
    }
    let r = isqrt(m);
    if r * r == m {
        split_cofactor(r, out)?;
        return split_cofactor(r, out);
    }
    for bound in [1_000u64, 10_000, 100_000] {
        for seed in 0..10u64 {
            let found = match factor::pollard_p1(m, bound, 2 + seed) {
                Ok(res) => res.divisor(),
                Err(_) => None,
            }
            .or_else(|| {
                factor::pell_pm1(m, 5, 3 + seed, bound)
                    .ok()
                    .and_then(|res| res.divisor())
            });
            if let Some(g) = found {
                split_cofactor(g, out)?;
                return split_cofactor(m / g, out);
            }
        }
    }
    Err(Error::OutOfRange(format!(
        "cofactor {m} has no factor below {TRIAL_DIVISION_LIMIT} and resisted p±1 splitting"
    )))
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
///
/// `p` may be a probable prime under test: any inconsistency that cannot
/// happen modulo a prime is reported as [`Error::NotPrime`].
pub fn mod_sqrt(a: u64, p: u64) -> Result<Option<u64>> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::BadModulus(p));
    }
    let a = a % p;
    if a == 0 {
        return Ok(Some(0));
    }
    let euler = pow_mod(a, (p - 1) / 2, p);
    if euler == p - 1 {
        return Ok(None);
    }
    if euler != 1 {
        return Err(Error::NotPrime(p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    loop {
        if z >= p {
            return Err(Error::NotPrime(p));
        }
        match pow_mod(z, (p - 1) / 2, p) {
            e if e == p - 1 => break,
            1 => z += 1,
            _ => return Err(Error::NotPrime(p)),
        }
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            if i >= m {
                return Err(Error::NotPrime(p));
            }
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    if mul_mod(r, r, p) != a {
        return Err(Error::NotPrime(p));
    }
    Ok(Some(r))
}
