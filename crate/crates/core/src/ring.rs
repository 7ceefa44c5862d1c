// SPDX-License-Identifier: Apache-2.0

//! Coefficient rings for conic arithmetic.
//!
//! [`Exact`] wraps any `num-traits` scalar (machine integers, `BigInt`,
//! `BigRational`); the modular rings carry their modulus at runtime. Every
//! ring provides halving, which is all the group law divides by.

use std::fmt::Debug;
use std::hash::Hash;
use std::marker::PhantomData;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, Num, One, Zero};

use crate::error::{Error, Result};
use crate::nt;

pub trait Ring {
    type Elem: Clone + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `a / 2`. Over ℤ an odd argument is an invariant violation and panics.
    fn half(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// A ring small enough to list.
pub trait FiniteRing: Ring {
    fn size(&self) -> u64;
    fn elements(&self) -> Vec<Self::Elem>;
}

/// Exact arithmetic on a `num-traits` scalar: ℤ for integer types, ℚ for ratios.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exact<T>(PhantomData<T>);

impl<T> Exact<T> {
    pub fn new() -> Self {
        Exact(PhantomData)
    }
}

impl<T> Ring for Exact<T>
where
    T: Clone + Num + FromPrimitive + Eq + Hash + Debug,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn from_i64(&self, v: i64) -> T {
        T::from_i64(v).expect("scalar type cannot hold an i64")
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn neg(&self, a: &T) -> T {
        T::zero() - a.clone()
    }
    fn half(&self, a: &T) -> T {
        let two = T::one() + T::one();
        let h = a.clone() / two.clone();
        assert!(h.clone() * two == *a, "{a:?} is not divisible by 2 in this ring");
        h
    }
    fn inv(&self, a: &T) -> Option<T> {
        if a.is_zero() {
            return None;
        }
        let q = T::one() / a.clone();
        (q.clone() * a.clone() == T::one()).then_some(q)
    }
}

/// ℤ/nℤ for odd `n ≥ 3` that fits a machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zmod {
    n: u64,
    half_one: u64,
}

impl Zmod {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::BadModulus(n));
        }
        Ok(Zmod { n, half_one: n / 2 + 1 })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn reduce(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.n as i128) as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        nt::pow_mod(a, e, self.n)
    }

    /// Inverse of `a`, or the nontrivial gcd exposing a zero divisor.
    pub fn try_inv(&self, a: u64) -> std::result::Result<u64, u64> {
        nt::inv_mod(a, self.n)
    }
}

impl Ring for Zmod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.n as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        nt::mul_mod(*a, *b, self.n)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.n - a
        }
    }
    fn half(&self, a: &u64) -> u64 {
        nt::mul_mod(*a, self.half_one, self.n)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        self.try_inv(*a).ok()
    }
}

impl FiniteRing for Zmod {
    fn size(&self) -> u64 {
        self.n
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.n).collect()
    }
}

/// ℤ/nℤ for odd moduli of any size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigZmod {
    n: BigUint,
    half_one: BigUint,
}

impl BigZmod {
    pub fn new(n: BigUint) -> Result<Self> {
        if n < BigUint::from(3u8) || !n.bit(0) {
            return Err(Error::Precondition(format!("modulus {n} must be odd and at least 3")));
        }
        let half_one = (&n >> 1) + 1u8;
        Ok(BigZmod { n, half_one })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.n
    }
}

impl Ring for BigZmod {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn from_i64(&self, v: i64) -> BigUint {
        let m = BigUint::from(v.unsigned_abs()) % &self.n;
        if v < 0 {
            self.neg(&m)
        } else {
            m
        }
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.n
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.n - (b - a)
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.n
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.n - a
        }
    }
    fn half(&self, a: &BigUint) -> BigUint {
        (a * &self.half_one) % &self.n
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        a.modinv(&self.n)
    }
}

/// The finite field `F_{p^f}` as `F_p[t]/(m(t))` with a monic irreducible `m`.
///
/// Elements are coefficient vectors of length `f`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf {
    p: u64,
    modulus: Vec<u64>,
}

/// Extension degrees whose irreducibility we can certify by a root search.
pub const MAX_EXTENSION_DEGREE: usize = 3;

impl Gf {
    /// `F_{p^f}` with the first irreducible monic modulus in lexicographic order.
    pub fn new(p: u64, f: usize) -> Result<Self> {
        Self::check_base(p, f)?;
        if f == 1 {
            return Ok(Gf { p, modulus: vec![0, 1] });
        }
        let total = p.pow(f as u32);
        for code in 0..total {
            let mut m: Vec<u64> = (0..f).map(|i| code / p.pow(i as u32) % p).collect();
            m.push(1);
            if !has_root(&m, p) {
                return Ok(Gf { p, modulus: m });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_p[t]/(m(t))` for a caller-supplied monic modulus, lowest degree first.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let f = modulus.len().saturating_sub(1);
        Self::check_base(p, f)?;
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadExtension(format!("modulus {modulus:?} must be monic with coefficients in [0, {p})")));
        }
        if f > 1 && has_root(&modulus, p) {
            return Err(Error::BadExtension(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(Gf { p, modulus })
    }

    fn check_base(p: u64, f: usize) -> Result<()> {
        if p < 3 || !nt::is_prime(p) {
            return Err(Error::BadExtension(format!("characteristic {p} must be an odd prime")));
        }
        if f == 0 || f > MAX_EXTENSION_DEGREE {
            return Err(Error::BadExtension(format!("degree {f} outside 1..={MAX_EXTENSION_DEGREE}")));
        }
        Ok(())
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn constant(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = c % self.p;
        v
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn has_root(m: &[u64], p: u64) -> bool {
    (0..p).any(|x| m.iter().rev().fold(0, |acc, &c| (nt::mul_mod(acc, x, p) + c) % p) == 0)
}

impl Ring for Gf {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.constant(1)
    }
    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.constant((v as i128).rem_euclid(self.p as i128) as u64)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + nt::mul_mod(*x, *y, p)) % p;
            }
        }
        for i in (f..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..f {
                let t = nt::mul_mod(c, self.modulus[j], p);
                prod[i - f + j] = (prod[i - f + j] + p - t) % p;
            }
            prod[i] = 0;
        }
        prod.truncate(f);
        prod
    }
    fn half(&self, a: &Vec<u64>) -> Vec<u64> {
        let h = self.p / 2 + 1;
        a.iter().map(|x| nt::mul_mod(*x, h, self.p)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.size() - 2))
    }
}

impl FiniteRing for Gf {
    fn size(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }
    fn elements(&self) -> Vec<Vec<u64>> {
        let f = self.degree();
        (0..self.size())
            .map(|code| (0..f).map(|i| code / self.p.pow(i as u32) % self.p).collect())
            .collect()
    }
}

/// Description of a coefficient ring, as named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingCtx {
    Integers,
    IntegersMod(u64),
    PrimeField(u64),
    ExtField { p: u64, f: usize, modulus: Vec<u64> },
}

impl RingCtx {
    pub fn integers_mod(n: u64) -> Result<Self> {
        Zmod::new(n)?;
        Ok(RingCtx::IntegersMod(n))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Zmod::new(p)?;
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(RingCtx::PrimeField(p))
    }

    pub fn ext_field(p: u64, f: usize) -> Result<Self> {
        let gf = Gf::new(p, f)?;
        Ok(RingCtx::ExtField { p, f, modulus: gf.modulus })
    }

    /// The finite ring this context names; `None` for ℤ.
    pub fn finite(&self) -> Result<Option<FiniteCtx>> {
        Ok(match self {
            RingCtx::Integers => None,
            RingCtx::IntegersMod(n) | RingCtx::PrimeField(n) => Some(FiniteCtx::Zmod(Zmod::new(*n)?)),
            RingCtx::ExtField { p, modulus, .. } => Some(FiniteCtx::Gf(Gf::with_modulus(*p, modulus.clone())?)),
        })
    }
}

/// A constructed finite ring from a [`RingCtx`].
#[derive(Debug, Clone)]
pub enum FiniteCtx {
    Zmod(Zmod),
    Gf(Gf),
}
