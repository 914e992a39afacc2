use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("value not finitely representable: {0}")]
    Overflow(String),

    #[error("degenerate noise channel (p = {p}, q = {q}): likelihood factors are undefined")]
    DegenerateNoise { p: f64, q: f64 },

    #[error("clique enumeration exceeded the cap of {cap} cliques")]
    CliqueBudgetExceeded { cap: u64 },

    #[error("budget exceeded: {what} needs {requested}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("observation has zero probability under the model")]
    ZeroEvidence,

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("unsupported arity d = {0}")]
    UnsupportedArity(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::Overflow(_) => "Overflow",
            Error::DegenerateNoise { .. } => "DegenerateNoise",
            Error::CliqueBudgetExceeded { .. } => "CliqueBudgetExceeded",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::ZeroEvidence => "ZeroEvidence",
            Error::UnsupportedRegime(_) => "UnsupportedRegime",
            Error::UnsupportedArity(_) => "UnsupportedArity",
            Error::Parse { .. } => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
