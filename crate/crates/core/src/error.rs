use thiserror::Error;

/// Errors raised by the library. Search bounds being hit is not an error;
/// those outcomes are reported in the result types instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed regex: {0}")]
    MalformedRegex(String),

    #[error("symbol `{0}` is not in the alphabet")]
    Alphabet(String),

    #[error("substitution has no image for symbol `{0}`")]
    IncompleteSubstitution(String),

    #[error("unknown table `{0}`")]
    UnknownTable(String),

    #[error("embedded grammar for rule {rule}: {reason}")]
    Composition { rule: String, reason: String },

    #[error("malformed configuration: {0}")]
    Configuration(String),

    #[error("check-stack `{0}` is not in the check-stack language")]
    CheckStackRejected(String),

    #[error("machine is not in restricted form: {0}")]
    NotNormalized(String),

    #[error("unsupported grammar form: {0}")]
    Unsupported(String),

    #[error("`{name}` is {found}, expected {expected}")]
    Classification {
        name: String,
        expected: &'static str,
        found: String,
    },

    #[error("generator `{0}` has no inverse in the generating set")]
    Symmetry(String),

    #[error("schema error at {at}: {msg}")]
    Schema { at: String, msg: String },

    #[error("state `{0}` does not define a permutation of the alphabet")]
    Permutation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn schema(at: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Schema {
            at: at.into(),
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
