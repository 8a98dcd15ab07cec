use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate point identifier `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("index {index} out of range for a collection of size {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("set {0} is not open")]
    NotOpen(String),
    #[error("map is not continuous: {0}")]
    NotContinuous(String),
    #[error("not a frame: {0}")]
    NotAFrame(String),
    #[error("family is not directed: {0}")]
    NotDirected(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown functor `{0}`")]
    UnknownFunctor(String),
    #[error("unknown lifting `{0}`")]
    UnknownLifting(String),
    #[error("unknown axiom system `{0}`")]
    UnknownSystem(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("lifting `{id}` has arity {expected} but was given {found} arguments")]
    ArityMismatch { id: String, expected: usize, found: usize },
    #[error("unknown proposition letter `{0}`")]
    UnknownProposition(String),
    #[error("functor mismatch: {0} vs {1}")]
    FunctorMismatch(String, String),
    #[error("element {0} is not in the functor carrier")]
    NotInCarrier(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("resource bound exceeded: {what} (limit {limit})")]
    ResourceBound { what: String, limit: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Io(String),
    /// An error located inside a document, e.g. `gamma.x`.
    #[error("{path}: {inner}")]
    At { path: String, inner: Box<Error> },
}

impl Error {
    pub fn resource(what: impl Into<String>, limit: usize) -> Self {
        Error::ResourceBound { what: what.into(), limit }
    }

    /// Short machine-readable tag, used in error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicatePoint(_) => "duplicate-point",
            Error::UnknownPoint(_) => "unknown-point",
            Error::OutOfRange { .. } => "out-of-range",
            Error::NotATopology(_) => "not-a-topology",
            Error::NotOpen(_) => "not-open",
            Error::NotContinuous(_) => "not-continuous",
            Error::NotAFrame(_) => "not-a-frame",
            Error::NotDirected(_) => "not-directed",
            Error::UnknownGenerator(_) => "unknown-generator",
            Error::UnknownFunctor(_) => "unknown-functor",
            Error::UnknownLifting(_) => "unknown-lifting",
            Error::UnknownSystem(_) => "unknown-system",
            Error::UnknownRule(_) => "unknown-rule",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::UnknownProposition(_) => "unknown-proposition",
            Error::FunctorMismatch(..) => "functor-mismatch",
            Error::NotInCarrier(_) => "not-in-carrier",
            Error::Syntax { .. } => "syntax",
            Error::ResourceBound { .. } => "resource-bound",
            Error::Invalid(_) => "invalid",
            Error::Invariant(_) => "invariant",
            Error::Io(_) => "io",
            Error::At { inner, .. } => inner.kind(),
        }
    }

    pub fn is_resource(&self) -> bool {
        match self {
            Error::ResourceBound { .. } => true,
            Error::At { inner, .. } => inner.is_resource(),
            _ => false,
        }
    }

    /// Prefix the location of the error inside a document.
    pub fn at(self, path: impl Into<String>) -> Error {
        let path = path.into();
        match self {
            Error::At { path: inner_path, inner } => {
                let sep = if inner_path.starts_with('[') { "" } else { "." };
                Error::At { path: format!("{path}{sep}{inner_path}"), inner }
            }
            e => Error::At { path, inner: Box::new(e) },
        }
    }
}
