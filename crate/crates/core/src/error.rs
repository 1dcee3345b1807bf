use thiserror::Error;

use crate::poset::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed sequence spec `{spec}`: {reason}")]
    MalformedSequence { spec: String, reason: String },

    #[error("inadmissible sequence term F_{index} = {value}: {reason}")]
    InadmissibleTerm {
        index: usize,
        value: String,
        reason: &'static str,
    },

    #[error("sequence `{spec}` is only defined up to index {last}, F_{index} requested")]
    BeyondPrefix {
        spec: String,
        last: usize,
        index: usize,
    },

    #[error("level {level} holds {width} vertices, too many to materialize")]
    LevelTooWide { level: usize, width: String },

    #[error("vertex {0} is not an element of the cobweb poset")]
    InadmissibleVertex(Vertex),

    #[error("vertex {vertex} is not in P_{depth}")]
    VertexNotInPoset { vertex: Vertex, depth: usize },

    #[error("incidence functions live on different posets ({left} vs {right})")]
    PosetMismatch { left: String, right: String },

    #[error("not invertible: zero diagonal entry at {0}")]
    NotInvertible(Vertex),

    #[error("expected a zero diagonal, found nonzero entry at {0}")]
    NonzeroDiagonal(Vertex),

    #[error("function value missing at {0}")]
    MissingValue(Vertex),

    #[error("entry at ({row}, {col}) lies outside the order relation")]
    SupportViolation { row: usize, col: usize },

    #[error("malformed matrix dump: {0}")]
    MalformedMatrix(String),
}
