use thiserror::Error;

/// Errors raised by belief arithmetic, update rules, network checks and the
/// simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {what} has {found} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("unknown signal id {0}")]
    UnknownSignal(usize),

    #[error("unknown signal label {0:?}")]
    UnknownSignalLabel(String),

    #[error("degenerate prior: no mass where the likelihood is positive")]
    DegeneratePrior,

    #[error("degenerate support: mixed distributions share no state with positive mass")]
    DegenerateSupport,

    #[error("invalid belief: {0}")]
    InvalidBelief(String),

    #[error("invalid signal model: {0}")]
    InvalidSignalModel(String),

    #[error("invalid state space: {0}")]
    InvalidStateSpace(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("brute-force enumeration supports at most {max} states, got {found}")]
    TooManyStates { max: usize, found: usize },

    #[error("invalid grid step {0}: must lie in (0, 0.1] and divide 1")]
    InvalidGridStep(f64),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("window B={window} exceeds sequence length {len}")]
    WindowTooLarge { window: usize, len: usize },

    #[error("invalid condition arguments: {0}")]
    ConditionArguments(String),

    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },

    #[error("invalid trial configuration: {0}")]
    InvalidConfig(String),

    #[error("agent {agent}: {source}")]
    Agent {
        agent: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_agent(self, agent: usize) -> Self {
        Error::Agent {
            agent,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
