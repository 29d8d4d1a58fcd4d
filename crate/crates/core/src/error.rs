use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a valid prime modulus here")]
    InvalidModulus(u64),

    #[error("out of contract: {0}")]
    OutOfContract(String),

    #[error("series is not invertible: {0}")]
    NonInvertible(String),

    #[error("coefficient at exponent {exponent} is not {p}-integral")]
    NotIntegral { exponent: i64, p: u64 },

    #[error("coefficient of {term} is not {p}-integral")]
    NotIntegralTerm { term: String, p: u64 },

    #[error("pole part must be cleared before this operation")]
    PoleNotCleared,

    #[error("q-coefficient at exponent {0} is not zeta-antisymmetric")]
    NotDivisible(i64),

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("series is not quasimodular of weight {weight}: first failing coefficient at q^{exponent}")]
    NotQuasimodular { weight: u32, exponent: i64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
