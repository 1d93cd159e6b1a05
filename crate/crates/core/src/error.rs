use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate point name `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {index} out of range for a space of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("relation is not a preorder: {0}")]
    NotPreorder(String),
    #[error("relation is not an equivalence relation: {0}")]
    RelationNotEquivalence(String),
    #[error("map is not continuous: {0}")]
    NotContinuous(String),
    #[error("subset is not stable: {0}")]
    NotStable(String),
    #[error(
        "closure of a stable subset is not stable ({0}); the groupoid violates its own axioms"
    )]
    InternalLemmaFailure(String),
    #[error("subgroupoid is not closed in the restriction to its base")]
    NotClosed,
    #[error("subgroupoid is not in the stable subset: {0}")]
    NotInS(String),
    #[error("subgroupoid is not full in the stable subset")]
    NotFull,
    #[error("subgroupoid is invalid:\n{0}")]
    InvalidSubgroupoid(Report),
    #[error("groupoid mismatch: {0}")]
    GroupoidMismatch(String),
    #[error("middle groupoids of the composed equivalences differ")]
    MiddleMismatch,
    #[error("result is not a resolution:\n{0}")]
    NotAResolution(Report),
    #[error("invalid {what}:\n{report}")]
    Invalid { what: String, report: Report },
    #[error("hypothesis failed: {0}")]
    HypothesisFailure(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("validation failed for `{object}`: {clause}")]
    Validation { object: String, clause: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
