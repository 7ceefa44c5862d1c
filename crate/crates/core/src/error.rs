// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("d = {0} is excluded (d must be squarefree and different from 0 and 1)")]
    ExcludedRadicand(i64),
    #[error("zero has no square class")]
    Zero,
    #[error("{0} is not a discriminant (must be ≡ 0 or 1 mod 4)")]
    NotDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("discriminant {0} must be positive")]
    NonPositiveDiscriminant(i64),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must be odd and at least 3")]
    BadModulus(u64),
    #[error("invalid extension field: {0}")]
    BadExtension(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("incomplete factorization of {n}: {reason}")]
    IncompleteFactorization { n: u64, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("input outside the supported range: {0}")]
    OutOfRange(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
