use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(u32),
    #[error("word is not a factor: {0}")]
    NotAFactor(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Budget and overflow failures, as opposed to malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }
}
