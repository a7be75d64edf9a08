use thiserror::Error;

use crate::learner::LearnStats;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid monoid presentation: {0}")]
    InvalidMonoid(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("left divisor does not divide the value")]
    NotDivisible,

    #[error("element is not invertible")]
    NotInvertible,

    #[error("unknown input letter `{0}`")]
    UnknownLetter(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("state lgcd iteration did not stabilize within {0} rounds")]
    IterationBudgetExceeded(usize),

    #[error("learning budget exceeded after {} loop iterations", stats.loop_iterations)]
    BudgetExceeded { stats: LearnStats },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("input machine is not minimal")]
    NotMinimalInput,

    #[error("machines are not isomorphic but no difference was found up to length {0}")]
    SearchBoundExceeded(usize),

    #[error("machines are over different monoids or alphabets")]
    Incompatible,

    #[error("equivalence oracle was consulted: {0}")]
    EquivalenceAborted(String),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
