use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("sublattice is not contained in the ambient lattice")]
    NotContained,
    #[error("quotient has infinite index (rational rank drops from {big} to {small})")]
    InfiniteIndex { big: usize, small: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("operands belong to different algebras or rings")]
    AlgebraMismatch,
    #[error("no primitive {0}-th root of unity in this field")]
    NoRootOfUnity(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precision exhausted: no certified leading term")]
    PrecisionExhausted,
    #[error("element has negative valuation")]
    NegativeValuation,
    #[error("zero element has no valuation")]
    ZeroElement,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,
    #[error("representation relation failed: {0}")]
    RelationFailure(String),
    #[error("element does not have reduced norm 1")]
    NotNormOne,
    #[error("comparison undecided at working precision")]
    Undecided,
    #[error("retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("no monomial representative for grade {0}")]
    NoRepresentative(String),
    #[error("{msg} at line {line}, column {column}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inconsistent: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
