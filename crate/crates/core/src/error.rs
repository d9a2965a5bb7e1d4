use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rack: {0}")]
    InvalidRack(String),

    #[error("not a rack: right distributivity fails at ({a}*{b})*{c} != ({a}*{c})*({b}*{c})")]
    NotDistributive { a: usize, b: usize, c: usize },

    #[error("not a rack: right translation by {b} is not a bijection ({a1}*{b} = {a2}*{b})")]
    NotBijective { a1: usize, a2: usize, b: usize },

    #[error("{0} theory requires a quandle")]
    RequiresQuandle(&'static str),

    #[error("operation requires a kei (involutive quandle)")]
    RequiresKei,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degree {0} is not valid here")]
    InvalidDegree(usize),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("{name} is not a chain map in degree {degree}: witness {witness}")]
    NotAChainMap {
        name: String,
        degree: usize,
        witness: String,
    },

    #[error("{name} has not been verified as a chain map in degree {degree}")]
    Unverified { name: String, degree: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
