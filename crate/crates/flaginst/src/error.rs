use thiserror::Error;

use crate::ring::Bidegree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("maps do not compose to zero: entry ({row},{col}) of term {term} reduces to {entry}")]
    CompositionNonzero { term: usize, row: usize, col: usize, entry: String },
    #[error("internal differential does not square to zero ({0})")]
    LiftInconsistent(String),
    #[error("entry bidegree mismatch at ({row},{col}): expected {expected}, found {found}")]
    BidegreeMismatch { row: usize, col: usize, expected: Bidegree, found: String },
    #[error("cohomology entry h^{index} of {column} is not determined: range [{lo}, {hi}]")]
    Undetermined { column: String, index: usize, lo: i64, hi: i64 },
    #[error("no verified monad after {attempts} attempts: {reasons:?}")]
    BudgetExhausted { attempts: usize, reasons: Vec<String> },
    #[error("constant block has rank {rank}, expected {expected}")]
    TrimDegenerate { rank: usize, expected: usize },
    #[error("rank drops at point {point}: {map} has rank {rank}, expected {expected}")]
    RankDropAt { map: String, point: String, rank: usize, expected: usize },
    #[error("{map} is not certified of full rank everywhere: {detail}")]
    Degeneracy { map: String, detail: String },
    #[error("section-level determinant vanishes")]
    DeterminantZero,
    #[error("Chern classes do not match an instanton of charge {charge}: {found}")]
    ChernMismatch { charge: usize, found: String },
    #[error("self-duality check failed: {0}")]
    SelfDuality(String),
    #[error("degenerate parametrization basis for {0}")]
    DegenerateBasis(String),
    #[error("pencil is constant")]
    ConstantPencil,
    #[error("restricted cohomology is not of rank {expected}: {detail}")]
    RankUnexpected { expected: usize, detail: String },
    #[error("conic is reducible")]
    ReducibleInput,
    #[error("pencil determinant vanishes identically")]
    IdenticallyZero,
    #[error("determinant root not confirmed by the splitting oracle: {0}")]
    RootValidationFailed(String),
    #[error("class {0} is not invertible")]
    NotInvertible(String),
    #[error("non-integral rank {0}")]
    NonIntegralRank(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
