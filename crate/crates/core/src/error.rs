use alloc::string::String;

use crate::parse::ParseError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid encoding configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("formula is not in {0}")]
    NotInNormalForm(&'static str),

    #[error("position {position} is outside a trace of length {len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("traces must contain at least one letter")]
    EmptyTrace,

    #[error("{what} budget of {limit} exceeded")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("interrupted by deadline")]
    Interrupted,

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("automata are defined over different alphabets")]
    AlphabetMismatch,

    #[error("alphabet of {0} atoms is too large for explicit letters")]
    AlphabetTooLarge(usize),

    #[error("sentence references position offset {0}, outside the x-1..x+1 window")]
    WindowViolation(i32),

    #[error("sentence does not match the formula it is evaluated against")]
    WitnessMismatch,
}

impl Error {
    /// Resource exhaustion as opposed to a malformed request.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Interrupted)
    }
}
