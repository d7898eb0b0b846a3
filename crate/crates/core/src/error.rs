use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("player index {index} out of range for a {players}-player game")]
    PlayerIndex { index: usize, players: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cost oracle failed: {0}")]
    Cost(String),
    #[error("profile is not feasible for the original game")]
    InfeasibleProfile,
    #[error("strategy set of player {0} is empty for the given rival profile")]
    EmptyStrategySet(usize),
    #[error("relaxed joint strategy set is empty")]
    EmptyRelaxation,
    #[error("operation not supported: {0}")]
    Unsupported(String),
    #[error("instance generation failed: {0}")]
    Generation(String),
    #[error("enumeration exceeded the cap of {cap} profiles")]
    EnumerationCap { cap: usize },
    #[error("linear program is {0}")]
    Lp(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
