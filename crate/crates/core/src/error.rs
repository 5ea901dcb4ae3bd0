use thiserror::Error;

/// Errors raised by the library.
///
/// Input problems (bad syntax, unknown ids, graphs that fail validation,
/// malformed characters) are distinguished from internal consistency
/// failures via [`Error::is_internal`]. The latter signal a computation
/// that contradicts an identity the results must satisfy.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{id}` has weight {weight}; weights must be <= -1")]
    InvalidWeight { id: String, weight: i64 },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("intersection matrix is not negative definite (leading minor {minor} has the wrong sign)")]
    NotNegativeDefinite { minor: usize },
    #[error("`{0}` is not a node (degree >= 3)")]
    NotANode(String),
    #[error("cycle is not in the dual lattice L*")]
    NotInDualLattice,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("cycle is not effective")]
    NonEffective,
    #[error("cycle out of range: {0}")]
    CycleOutOfRange(String),
    #[error("monomial condition not established: {0}")]
    MonomialConditionUnknown(String),
    #[error("could not draw a coefficient matrix with nonzero maximal minors after {0} attempts")]
    DegenerateCoefficients(usize),
    #[error("internal assertion failed: {0}")]
    Assertion(#[from] AssertionFailure),
}

impl Error {
    /// True for consistency failures inside a computation, false for bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Assertion(_) | Error::DegenerateCoefficients(_))
    }
}

/// A violated internal identity. Each carries enough context to locate the
/// offending computation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssertionFailure {
    #[error("irrational coefficient {context}")]
    IrrationalCoefficient { context: String },
    #[error("negative or non-integral dimension {context}")]
    NegativeDimension { context: String },
    #[error("routes disagree for c_v: {context}")]
    MismatchedRoutes { context: String },
    #[error("c_v changes with m: {context}")]
    UnstableInM { context: String },
    #[error("negative or non-integral h1: {context}\ntrace:\n{trace}")]
    NegativeH1 { context: String, trace: String },
    #[error("root node choices disagree: {0}")]
    NodeDependence(String),
    #[error("{0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Assertion(AssertionFailure::Invariant(msg.into()))
}
