use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("payoff missing for profile {profile:?}")]
    MissingProfile { profile: Vec<usize> },

    #[error("player {player} has duplicate label {label:?}")]
    DuplicateLabel { player: usize, label: String },

    #[error("index {index} out of range for player {player} ({len} actions)")]
    IndexOutOfRange {
        player: usize,
        index: usize,
        len: usize,
    },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid probability distribution: {0}")]
    InvalidProbability(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("argmax for player {player} action {action} is not unique: tied opponent profiles {tied:?}")]
    DegenerateArgmax {
        player: usize,
        action: usize,
        tied: Vec<Vec<usize>>,
    },

    #[error("no mixture of player {player} yields the same own payoff against every opponent action")]
    Infeasible { player: usize },

    #[error("size {size} exceeds limit {limit}")]
    SizeLimit { size: u128, limit: u128 },

    #[error("player {player} does not appear on the cycle")]
    AnchorNotOnCycle { player: usize },

    #[error("operation requires a two-player game, got {players} players")]
    NotTwoPlayer { players: usize },

    #[error("type {type_index} of player {player} has zero prior probability")]
    ZeroProbabilityType { player: usize, type_index: usize },

    #[error("unknown {kind} {name:?}")]
    UnknownLabel { kind: &'static str, name: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Errors caused by malformed or inconsistent input documents.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::DegenerateArgmax { .. }
                | Error::Infeasible { .. }
                | Error::AnchorNotOnCycle { .. }
                | Error::NotTwoPlayer { .. }
                | Error::SizeLimit { .. }
        )
    }
}
