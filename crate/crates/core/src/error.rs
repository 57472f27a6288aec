use thiserror::Error;

/// Errors raised while loading or validating grammars and lexica.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("grammar has no start rule")]
    NoStartRule,

    #[error("start symbol `{0}` has no rule")]
    StartWithoutRule(String),

    #[error("nonterminal `{0}` occurs in a word but has no rule")]
    DeadNonterminal(String),

    #[error("`{0}` is used both as a terminal and as a nonterminal")]
    NameCollision(String),

    #[error("reserved start symbol `{0}` occurs inside a word")]
    ReservedStartInWord(String),

    #[error("nonterminal `{nt}` has rules of several categories ({categories}); normalize first")]
    AmbiguousTarget { nt: String, categories: String },

    #[error("rule `{0}` has no item shape; decompose the grammar first")]
    Undecomposed(String),

    #[error("lexicon has no final category and none can be inferred")]
    NoFinalCategory,

    #[error("lexicon was compiled from a different grammar (digest {found}, expected {expected})")]
    ProvenanceMismatch { expected: String, found: String },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// An enumeration ran out of budget. `partial` holds what was found so far.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("budget exhausted after {explored} states")]
pub struct BudgetExceeded<T> {
    pub partial: T,
    pub explored: usize,
}
