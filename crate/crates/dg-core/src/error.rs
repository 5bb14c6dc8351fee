use thiserror::Error;

use crate::validate::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid distinguishing graph:\n{0}")]
    Invalid(ValidationReport),

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph is not realizable (it has a conic vertex)")]
    NotRealizable,

    #[error("graph is not smoothed: vertex `{0}` is a removable degree-2 vertex")]
    NotSmoothed(String),

    #[error("instance too large for the exhaustive oracle: {0}")]
    OracleSize(String),

    #[error("invalid word: {0}")]
    Word(String),

    #[error("not a minimal-shape graph: {0}")]
    Shape(String),

    #[error("{0}")]
    UnsupportedRelation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
