use thiserror::Error;

/// Errors raised anywhere in the simulator, the statistics layer or the protocol.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("gate qubits must be distinct (got {0:?})")]
    DuplicateQubits(Vec<usize>),

    #[error("register size {0} unsupported (1 to 3 qubits)")]
    UnsupportedRegister(usize),

    #[error("measurement branch has zero probability ({probability:e}); state is not normalized")]
    ZeroProbabilityBranch { probability: f64 },

    #[error("probability `{name}` = {value} outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular design matrix in least-squares fit")]
    SingularDesign,

    #[error("fit did not converge after {iterations} iterations")]
    FitDidNotConverge { iterations: usize },

    #[error("hardware unusable: {0}")]
    HardwareUnusable(String),

    #[error("degenerate calibration: every calibration sample equals {value}, threshold would reject genuine tokens")]
    DegenerateCalibration { value: f64 },

    #[error("token pair {serial} already consumed")]
    Consumed { serial: String },

    #[error("bill aborted, consumed tokens present: {serials:?}")]
    BillContainsConsumed { serials: Vec<String> },

    #[error("no bill threshold reaches type-II target {target}")]
    UnreachableTarget { target: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}
