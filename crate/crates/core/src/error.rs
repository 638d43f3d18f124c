use thiserror::Error;

use crate::extremal::Certificate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}; supported orders are 2, 3, 4, 5, 7, 8, 9")]
    UnsupportedField(u32),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("lattice too large: {elements} elements exceed the cap of {cap}")]
    TooLarge { elements: String, cap: u64 },
    #[error("subspaces live in different ambient spaces")]
    MismatchedAmbient,
    #[error("elements span several levels")]
    MixedLevels,
    #[error("subspaces are not comparable")]
    NotComparable,
    #[error("families or patterns refer to different posets")]
    LatticeMismatch,
    #[error("element {0} is not a member of the family")]
    NotMember(usize),
    #[error("bad level: {0}")]
    BadLevel(String),
    #[error("level violation: {0}")]
    LevelViolation(String),
    #[error("rank ratio hypothesis fails: {0}")]
    PreconditionRatio(String),
    #[error("family does not satisfy the required freeness: {0}")]
    PreconditionFree(String),
    #[error("no saturating matching exists: {0}")]
    MatchingFailure(String),
    #[error("postcondition violated: {0}")]
    PostconditionViolated(String),
    #[error("bad structure: {0}")]
    BadStructure(String),
    #[error("family is not (Y, Y')-free")]
    NotYFree,
    #[error("poset does not have exactly two levels")]
    NotTwoLevel,
    #[error("bad dimensions: {0}")]
    BadDims(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded {
        budget: u64,
        best: Box<Certificate>,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
