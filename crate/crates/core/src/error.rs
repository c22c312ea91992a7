use thiserror::Error;

/// Errors raised by deck construction, the engines, the exact solver and the
/// statistics helpers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WarError {
    #[error("invalid deck: {0}")]
    InvalidDeck(String),
    #[error("hand size {size} out of range for a deck of {deck} cards")]
    SizeOutOfRange { size: usize, deck: usize },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("state is already absorbing")]
    Absorbing,
    #[error("rule `{rule}` cannot be used with this deck: {reason}")]
    RuleDeckMismatch { rule: String, reason: String },
    #[error("invalid strength function: {0}")]
    InvalidStrength(String),
    #[error("deck of {size} cards exceeds the enumeration limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("absorption is not almost sure: {count} states never reach an absorbing state (e.g. state {witness})")]
    NotAbsorbing { count: usize, witness: usize },
    #[error("singular system while eliminating level {level}")]
    Singular { level: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("empty sample")]
    EmptySample,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("unknown {kind} `{name}`; expected one of: {valid}")]
    UnknownName {
        kind: &'static str,
        name: String,
        valid: String,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = WarError> = std::result::Result<T, E>;
