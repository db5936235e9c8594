use crate::algebra::{ArrowName, VertexId};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("cannot compose `{left}` after `{right}`: endpoints do not match")]
    Composition { left: String, right: String },

    #[error("unknown arrow `{0}`")]
    UnknownArrow(ArrowName),

    #[error("vertex {0} is not a vertex of the quiver")]
    UnknownVertex(VertexId),

    #[error("arrow `{0}` is declared twice")]
    DuplicateArrow(ArrowName),

    #[error("arrow `{name}` has degree {degree}; stored arrows must have non-negative degree")]
    NegativeDegree { name: ArrowName, degree: i64 },

    #[error("differential of `{arrow}` has degree {found:?}, expected {expected}")]
    DegreeMismatch {
        arrow: ArrowName,
        expected: i64,
        found: Option<i64>,
    },

    #[error("differential of `{arrow}` contains a path with the wrong endpoints: {path}")]
    EndpointMismatch { arrow: ArrowName, path: String },

    #[error("d^2 is nonzero on `{arrow}`: residual {residual}")]
    DSquaredNonzero { arrow: ArrowName, residual: String },

    #[error("mutation at vertex {0} is not defined: there is a degree-0 loop `{1}` at it")]
    LoopAtVertex(VertexId, ArrowName),

    #[error("cannot regroup word into arrows of the mutated quiver: {0}")]
    Normalization(String),

    #[error("arrow name `{0}` already exists; generated names collide")]
    NameCollision(ArrowName),

    #[error("({rho}, {psi}) is not a cancellable pair: {reason}")]
    NotCancellable {
        rho: ArrowName,
        psi: ArrowName,
        reason: String,
    },

    #[error("substitution for `{psi}` did not terminate: stopped after {passes} of at most {max_steps} passes")]
    NonTermination {
        psi: ArrowName,
        max_steps: usize,
        passes: usize,
    },

    #[error("invalid op-pairing: {0}")]
    InvalidPairing(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid arrow correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}
