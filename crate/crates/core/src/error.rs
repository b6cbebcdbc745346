use thiserror::Error;

use crate::feasibility::Certificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptySet,
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("point is not strictly outside the hull")]
    NotExternal,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad partition spec: {0}")]
    Spec(String),
    #[error("{points} points but the sizes sum to {total}")]
    SizeMismatch { points: usize, total: usize },
    #[error("infeasible: {0}")]
    Infeasible(Certificate),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("collected cycle points are collinear")]
    SeparationDegenerate,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("formula: {0}")]
    Formula(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("search budget exhausted")]
    Exhausted,
}
