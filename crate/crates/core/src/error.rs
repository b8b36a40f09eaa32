use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("edge list contains a cycle")]
    CycleDetected,
    #[error("edge ({0}, {1}) has a negative weight")]
    NegativeWeight(usize, usize),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("total edge weight does not fit in 64 bits")]
    WeightOverflow,
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("algorithm requires an unweighted graph (all edge weights 1)")]
    WeightedInput,
    #[error("graph with {n} vertices exceeds the oracle cap of {cap}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
