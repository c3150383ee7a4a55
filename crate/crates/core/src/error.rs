use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("candidate index {index} out of range for {m} candidates")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("candidate {0} compared with itself")]
    SameCandidate(usize),

    #[error("candidate count mismatch: expected {expected}, found {found}")]
    CandidateMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("partial order violates antisymmetry: {a} > {b} and {b} > {a}")]
    Antisymmetry { a: usize, b: usize },

    #[error("duplicate candidate name `{0}`")]
    DuplicateCandidate(String),

    #[error("too many candidates ({0}); at most 64 are supported")]
    TooManyCandidates(usize),

    #[error("degenerate score vector: {0}")]
    DegenerateScoreVector(String),

    #[error("score vector has length {found}, election has {expected} candidates")]
    LengthMismatch { expected: usize, found: usize },

    #[error("empty profile")]
    EmptyProfile,

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("realization failed: {0}")]
    Realization(String),

    #[error("budget of {budget} exceeded (needed {needed})")]
    BudgetExceeded { budget: u64, needed: u128 },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
