use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid label {0:?}: labels must be non-empty and contain no whitespace")]
    InvalidLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{what} of size {size} exceeds the configured limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("{what} needs {work} steps, over the work limit {limit}")]
    WorkLimit {
        what: &'static str,
        work: u128,
        limit: u64,
    },
    #[error("subset is not contained in the vertex set")]
    Domain,
    #[error("vertex sets are not disjoint (shared label {0:?})")]
    NotDisjoint(String),
    #[error("not a bijection: {0}")]
    Bijection(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("invalid boolean function: {0}")]
    InvalidFunction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: graph not acyclic")]
    NotAcyclic,
    #[error("flow network has no cut of finite capacity")]
    Unbounded,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
