use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph is disconnected: `{0}` and `{1}` lie in different components")]
    Disconnected(String, String),

    #[error("graph is not median: triple ({0}, {1}, {2}) has no unique median")]
    NotMedian(String, String, String),

    #[error("representation invalid (not CAT(0)): {0}")]
    RepresentationInvalid(String),

    #[error("pocset invalid: {0}")]
    PocsetInvalid(String),

    #[error("inconclusive: {what} (radius budget {radius}, needed {needed})")]
    Inconclusive {
        what: String,
        radius: usize,
        needed: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("map is not a bijection: {0}")]
    NotBijective(String),

    #[error("generators do not generate: they span a subgroup of order {found} in a group of order {total}")]
    NotGenerating { found: usize, total: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive { .. })
    }
}
