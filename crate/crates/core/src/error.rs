use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at s = 1")]
    PoleAt1,
    #[error("accuracy budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular Euler factor at p = {prime}")]
    SingularFactor { prime: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },
    #[error("need a > b >= 1, got a = {a}, b = {b}")]
    NotGreater { a: u64, b: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bad truncation: {0}")]
    BadTruncation(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),
    #[error("inadmissible target: {0}")]
    InadmissibleTarget(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleAt1 => "PoleAt1",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::Domain(_) => "DomainError",
            Error::SingularFactor { .. } => "SingularFactor",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::NotGreater { .. } => "NotGreater",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::BadTruncation(_) => "BadTruncation",
            Error::TruncationTooSmall(_) => "TruncationTooSmall",
            Error::UnknownFunctional(_) => "UnknownFunctional",
            Error::InadmissibleTarget(_) => "InadmissibleTarget",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::Config(_) => "ConfigError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
