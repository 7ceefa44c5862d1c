// SPDX-License-Identifier: Apache-2.0

//! Arithmetic of Pell conics `X² − ΔY² = 4`.
//!
//! The group law lives in [`conic`] and is generic over the [`Ring`] trait, so
//! the same code runs over ℤ, ℚ, ℤ/nℤ and finite fields `F_{p^f}`. Exact
//! rings accept any `num-traits` scalar; the aliases below fix the common
//! choices.

pub mod abelian;
pub mod analytic;
pub mod conic;
pub mod descent;
pub mod error;
pub mod factor;
pub mod heights;
pub mod modular;
pub mod nt;
pub mod primality;
pub mod ring;

pub use conic::{ConicPoint, PellConic};
pub use error::{Error, Result};
pub use ring::{BigZmod, Exact, FiniteRing, Gf, Ring, RingCtx, Zmod};

use num_bigint::BigInt;
use num_rational::BigRational;

/// ℤ with arbitrary-precision integers.
pub type Integers = Exact<BigInt>;
/// ℚ with arbitrary-precision rationals.
pub type Rationals = Exact<BigRational>;
/// ℤ with machine integers; callers own the overflow risk.
pub type SmallIntegers = Exact<i64>;

pub type IntPoint = ConicPoint<BigInt>;
pub type RatPoint = ConicPoint<BigRational>;
pub type ModPoint = ConicPoint<u64>;
/// Points over `F_{p^f}`: coefficient vectors of length `f`.
pub type GfPoint = ConicPoint<Vec<u64>>;
