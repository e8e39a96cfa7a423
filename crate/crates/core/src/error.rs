use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("empty term value")]
    EmptyValue,
    #[error("malformed IRI `{0}`: not absolute")]
    MalformedIri(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnsupportedConstruct,
    UnknownPrefix,
    MalformedIri,
}

/// A positioned error from one of the text parsers. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind_str} at {line}:{column}: {message}", kind_str = self.kind_str())]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { kind, line, column, message: message.into() }
    }

    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self::new(ParseErrorKind::Syntax, line, column, message)
    }

    fn kind_str(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnsupportedConstruct => "unsupported construct",
            ParseErrorKind::UnknownPrefix => "unknown prefix",
            ParseErrorKind::MalformedIri => "malformed IRI",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AboxError {
    #[error("type misuse: {0}")]
    TypeMisuse(String),
}

/// An axiom outside the supported EL fragment.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unsupported axiom: {reason} in `{fragment}`")]
pub struct Unsupported {
    pub reason: String,
    pub fragment: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error(transparent)]
    Unsupported(#[from] Unsupported),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{0}` is used both as a concept and as a role")]
    SortClash(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("cyclic class hierarchy through `{0}`")]
    Cyclic(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsError {
    #[error("magnitude index out of range: i={i}, j={j}, pi={pi}")]
    OutOfRange { i: u32, j: u32, pi: u32 },
    #[error("invalid probability/severity configuration: pi={pi}, sigma={sigma}")]
    InvalidConfig { pi: u32, sigma: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("resource limit exceeded: more than {0} assertions")]
    TooManyAssertions(usize),
    #[error("resource limit exceeded: saturation ran longer than {0} s")]
    Timeout(u64),
    #[error(transparent)]
    Unsupported(#[from] Unsupported),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Dsl { path: PathBuf, source: DslError },
    #[error(transparent)]
    Abox(#[from] AboxError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Ps(#[from] PsError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::Reasoner(ReasonerError::TooManyAssertions(_) | ReasonerError::Timeout(_))
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
