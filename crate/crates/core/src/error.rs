//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base {0} is not a prime")]
    NotPrime(u64),
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point set too large: b^m = {base}^{m} exceeds the supported index range")]
    SizeOverflow { base: u64, m: u32 },
    #[error("enumeration budget too large: ~{candidates:.3e} candidates exceed the {limit:.1e} cap")]
    BudgetTooLarge { candidates: f64, limit: f64 },
    #[error("dual search budget {budget} exhausted before the minimum Dick metric was certified")]
    BudgetExhausted { budget: u64 },
    #[error("combinatorial search aborted after {visited} nodes (limit {limit})")]
    ExplosionGuard { visited: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
