use thiserror::Error;

/// Errors raised by the engine.
///
/// Failed law checks are never errors; they are reported as verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero series has no inverse")]
    ZeroNotInvertible,

    #[error("operation needs a strict binding of lam; the formal binding was given")]
    FormalMode,

    #[error("{0}")]
    FormalModeObstruction(String),

    #[error("series is truncated at lam^{0}; refusing to drop the unknown tail")]
    TruncatedTail(i64),

    #[error("cannot add Gaussian factors with different decay rates ({left} vs {right})")]
    AlphaMismatch { left: String, right: String },

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not integrable over phase space{}", power.map(|p| format!(" (coefficient of lam^{p})")).unwrap_or_default())]
    NotIntegrable { power: Option<i64> },

    #[error("functional cannot be normalized: {0}")]
    NotNormalizable(String),

    #[error("unsupported input form: {0}")]
    NotSupportedForm(String),

    #[error("a formal functional with an infinite principal part has no well-defined action")]
    InfinitePrincipalPart,

    #[error("star expansion does not terminate; an explicit truncation order is required")]
    OrderRequired,

    #[error("strict evaluation needs a terminating star expansion")]
    NonTerminating,

    #[error("weight {0} is not a rational multiple of a power of pi")]
    Transcendental(String),

    #[error("strict value of lam must be positive, got {0}")]
    NonPositiveLambda(String),

    #[error("invalid json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
