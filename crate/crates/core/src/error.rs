use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid probability {0}: must lie in (0, 1]")]
    InvalidProbability(String),
    #[error("probabilities sum to {0}, which exceeds 1")]
    SumExceedsOne(String),
    #[error("probabilities sum to {0}, expected exactly 1")]
    NotNormalized(String),
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(String),
    #[error("sub-source is not contained in the source: {0}")]
    Containment(String),
    #[error("need at least {min} symbols, got {got}")]
    Size { min: usize, got: usize },
    #[error("code tree leaves do not match the source symbols: {0}")]
    SymbolMismatch(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("alphabet size {n} exceeds the enumeration cap {cap}; opt in explicitly to go above it")]
    CapExceeded { n: usize, cap: usize },
    #[error("threshold {threshold} exceeds the enumeration cap {cap}; use the pruned general bound instead")]
    ThresholdTooLarge { threshold: usize, cap: usize },
    #[error("word {word} is longer than the maximum word length {max_len}")]
    LengthViolation { word: String, max_len: usize },
    #[error("dictionary is not exhaustive: {0}")]
    NonExhaustive(String),
    #[error("dictionary is empty")]
    EmptyDictionary,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
