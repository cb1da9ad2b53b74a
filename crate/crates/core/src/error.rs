use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no generators given")]
    EmptyInput,
    #[error("generator {0} is not positive")]
    NonPositiveGenerator(i64),
    #[error("parameter index {index} out of range for {len} generators")]
    InvalidParamIndex { index: usize, len: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("membership query {0} is negative")]
    NegativeQuery(i64),
    #[error("negative-remainder Euclid needs s0 > s1 > 0, got ({0}, {1})")]
    InvalidPair(u64, u64),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("S-pair reduction exceeded {0} rewrite steps")]
    NonTermination(u64),
    #[error("Apéry table incomplete: {missing} residues unfilled after {levels} levels")]
    IncompleteTable { missing: u64, levels: u64 },
}
