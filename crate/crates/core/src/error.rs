use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({src}, {dst}) has zero weight")]
    ZeroWeightEdge { src: usize, dst: usize },

    #[error("edge ({src}, {dst}) has a non-finite weight")]
    NonFiniteWeight { src: usize, dst: usize },

    #[error("duplicate edge ({src}, {dst})")]
    DuplicateEdge { src: usize, dst: usize },

    #[error("node {node} has no outgoing edge")]
    DanglingNode { node: usize },

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("graph generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("node set is not strongly connected")]
    NotStronglyConnected,

    #[error("sink component {component} is periodic (period {period})")]
    PeriodicComponent { component: usize, period: usize },

    #[error("iteration did not converge (residual {residual:e} after {iterations} iterations)")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("dynamics did not settle within {steps} steps (same-parity change {change:e})")]
    SlowMixing { steps: usize, change: f64 },

    #[error("operation requires {expected}, found {found}")]
    WrongKind {
        expected: &'static str,
        found: String,
    },

    #[error("instance too large for exhaustive search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("color probability {value} at node {node} outside [0, 1]")]
    InvalidDistribution { node: usize, value: f64 },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Errors caused by a numerical method failing, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::SlowMixing { .. })
    }
}
