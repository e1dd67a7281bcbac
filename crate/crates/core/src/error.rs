use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A diagnostic attached to a position in an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("{0} is not a subgroup of {1}")]
    NotSubgroup(String, String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("resource guard: {0}")]
    Guard(String),
    #[error("degree {0} lies outside the supported positive cone")]
    UnsupportedCone(String),
    #[error("malformed basis: {0}")]
    MalformedBasis(String),
    #[error("element not in the image of restriction: {0}")]
    NotLiftable(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("collapse not certified: {0}")]
    CollapseNotCertified(String),
    #[error("{}", format_diagnostics(.0))]
    Parse(Vec<Diagnostic>),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub(crate) fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse(vec![Diagnostic {
            line,
            column,
            message: message.into(),
        }])
    }
}
