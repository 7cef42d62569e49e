use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by precondition and invariant violations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("cannot parse rational from `{input}`")]
    RationalParse { input: String },
    #[error("{a} and {b} are not coprime")]
    NonCoprime { a: i64, b: i64 },
    #[error("modulus must be positive, got {value}")]
    NonPositiveModulus { value: i64 },
    #[error("coefficient index {index} is negative")]
    NegativeIndex { index: i64 },
    #[error("duplicate coefficient index {index}")]
    DuplicateIndex { index: i64 },
    #[error("polynomial is not symmetric at index {index}")]
    AsymmetricPolynomial { index: i64 },
    #[error("cannot parse polynomial: {reason}")]
    PolynomialParse { reason: String },
    #[error("polynomial evaluates to {got} at 1, expected torsion order {expected}")]
    NormalizationFailed { got: BigInt, expected: BigInt },
    #[error("lens space order must be positive, got {p}")]
    InvalidLensOrder { p: i64 },
    #[error("surgery coefficient p must be nonzero")]
    ZeroSurgeryCoefficient,
    #[error("longitude divisibility must be positive, got {d}")]
    InvalidDivisibility { d: i64 },
    #[error("torsion order must be positive, got {t}")]
    InvalidTorsionOrder { t: i64 },
    #[error("sweep bound must be at least 2, got {pmax}")]
    SweepBoundTooSmall { pmax: i64 },
    #[error("duplicate tower label `{label}`")]
    DuplicateTower { label: String },
    #[error("reduced generator references label `{label}` with no tower")]
    DanglingReduced { label: String },
    #[error("unknown spin-c label `{label}`")]
    UnknownSpincLabel { label: String },
    #[error("no rho' value supplied for label `{label}`")]
    MissingRhoPrime { label: String },
    #[error("tower bottom {d} is not congruent to rho' = {rho} mod 2")]
    RhoParityMismatch { d: String, rho: String },
    #[error("truncation level must be non-negative, got {n}")]
    NegativeTruncation { n: i64 },
    #[error("truncation level {n} too small: label `{label}` needs N >= {needed}")]
    TruncationTooSmall { n: i64, label: String, needed: i64 },
    #[error("no truncation levels supplied")]
    EmptyTruncationList,
    #[error("truncated Euler characteristic varies with N: k({n1}) = {k1} but k({n2}) = {k2}")]
    TruncationNotConstant {
        n1: i64,
        k1: String,
        n2: i64,
        k2: String,
    },
    #[error("reduced generator sign must be +1 or -1, got {sign}")]
    InvalidSign { sign: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
