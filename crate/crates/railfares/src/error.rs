//! Error types shared across the crate.
//!
//! Feed parsing and validation collect as many problems as possible into an
//! [`ErrorReport`] instead of stopping at the first bad record, so a single
//! validation run can surface every broken line in a feed. Lookup and query
//! functions return a single [`Error`] describing what was asked for.

use std::fmt;
use std::path::PathBuf;

/// Location of a record inside a feed file, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRef {
    /// File name the record came from, e.g. `flows.csv`.
    pub file: String,
    /// 1-based line number within that file (the header is line 1).
    pub line: u64,
}

impl fmt::Display for SourceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

/// Everything that can go wrong while loading feeds or answering queries.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Underlying filesystem failure while reading or writing.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A required feed file is absent from the feed directory.
    #[error("missing feed file: {path}")]
    MissingFile { path: PathBuf },

    /// A file's header row does not match the documented schema.
    #[error("{file}: bad header: expected `{expected}`, found `{found}`")]
    Schema {
        file: String,
        expected: String,
        found: String,
    },

    /// A single field failed validation (wrong shape, out of range, not a number).
    #[error("{file}:{line}: field `{column}`: {reason}")]
    Field {
        file: String,
        line: u64,
        column: String,
        reason: String,
    },

    /// The same key was defined twice where it must be unique.
    #[error("duplicate {kind} `{key}`: first at {first}, again at {second}")]
    DuplicateKey {
        kind: String,
        key: String,
        first: SourceRef,
        second: SourceRef,
    },

    /// A record references a code that is not defined anywhere in the feed.
    #[error("unknown code `{code}` referenced {context}{}", at.as_ref().map(|r| format!(" at {r}")).unwrap_or_default())]
    Referential {
        code: String,
        context: String,
        at: Option<SourceRef>,
    },

    /// A station key (CRS or NLC) passed to a query does not exist.
    #[error("unknown station `{key}`")]
    UnknownStation { key: String },

    /// A ticket code passed to a query does not exist.
    #[error("unknown ticket `{code}`")]
    UnknownTicket { code: String },

    /// No flow in the feed prices the requested journey.
    #[error("no flow prices {origin} -> {dest} for ticket {ticket}")]
    NoFlow {
        origin: String,
        dest: String,
        ticket: String,
    },

    /// A caller-supplied parameter is out of range or malformed.
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    /// A budget ladder is not strictly ascending.
    #[error("budgets must be strictly ascending, got {budgets:?}")]
    BudgetOrder { budgets: Vec<u32> },

    /// An operation that needs at least one value received none.
    #[error("empty input: {context}")]
    EmptyInput { context: String },

    /// A download manifest line could not be parsed.
    #[error("{file}:{line}: {reason}")]
    Config {
        file: String,
        line: u64,
        reason: String,
    },

    /// An HTTP fetch failed.
    #[error("download of {url} failed: {reason}")]
    Network { url: String, reason: String },

    /// A downloaded file's checksum does not match the manifest.
    #[error("checksum mismatch for {name}: expected {expected}, got {actual}")]
    HashMismatch {
        name: String,
        expected: String,
        actual: String,
    },
}

impl Error {
    /// Convenience constructor for [`Error::Field`].
    pub fn field(
        file: impl Into<String>,
        line: u64,
        column: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        Error::Field {
            file: file.into(),
            line,
            column: column.into(),
            reason: reason.into(),
        }
    }

    /// Convenience constructor for [`Error::Io`].
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// A batch of validation errors collected from one feed load.
///
/// Parsing keeps going after the first problem, so the report usually names
/// every bad line at once. The `Display` form writes one error per line.
#[derive(Debug, thiserror::Error)]
pub struct ErrorReport {
    pub errors: Vec<Error>,
}

impl ErrorReport {
    pub fn new(errors: Vec<Error>) -> Self {
        ErrorReport { errors }
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    /// Wraps `errors` into `Err(ErrorReport)` unless the list is empty.
    pub fn into_result(self) -> Result<(), ErrorReport> {
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} error(s) in feed:", self.errors.len())?;
        for err in &self.errors {
            writeln!(f, "  {err}")?;
        }
        Ok(())
    }
}

impl From<Error> for ErrorReport {
    fn from(err: Error) -> Self {
        ErrorReport { errors: vec![err] }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
