use std::io;

use thiserror::Error;

/// Errors from series arithmetic and I/O.
#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("coefficient rings do not match")]
    RingMismatch,
    #[error("leading coefficient is not a unit")]
    NonUnitLeading,
    #[error("coefficient at numerator {requested} is beyond the precision bound {end}")]
    PrecisionExceeded { requested: i64, end: i64 },
    #[error("malformed CSV dump: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Errors from the SL2(Z) utilities.
#[derive(Debug, Error)]
pub enum ModularError {
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i128),
    #[error("shift family requires 6 | m, got m = {0}")]
    ShiftModulusNotDivisible(u64),
    #[error("shift decomposition invariant violated: {0}")]
    DecompositionInvariant(String),
}

/// Errors from eta quotients and certificates.
#[derive(Debug, Error)]
pub enum EtaError {
    #[error("divisor {delta} does not divide the level {level}")]
    BadDivisor { delta: u64, level: u64 },
    #[error("malformed eta quotient spec: {0}")]
    Parse(String),
}

/// Errors from sieving and indicator construction.
#[derive(Debug, Error)]
pub enum SieveError {
    #[error("unsupported character modulus {0} (expected 3, 5 or 8)")]
    UnsupportedModulus(u64),
    #[error("target residue set is not realizable by quadratic characters")]
    UnrealizableTarget,
    #[error("series precision {have} too small for the numeric check (need {need})")]
    InsufficientPrecision { have: i64, need: i64 },
}

/// Errors from claim planning and verification.
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("claim family is not supported by the certificate machinery: {0}")]
    UnsupportedClaim(String),
    #[error("unknown named claim {0} (expected cesaro-3, cesaro-7 or omega-5)")]
    UnknownClaim(String),
    #[error("invalid claim: {0}")]
    InvalidClaim(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Eta(#[from] EtaError),
}
