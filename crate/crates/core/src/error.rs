use std::path::PathBuf;

use thiserror::Error;

/// Reasons a CSV row can be rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    BadHeader,
    MalformedRow,
    MalformedDate,
    NonIntegerValue,
    CalendarGap,
    DuplicateMonth,
    EmptyBody,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ParseErrorKind::BadHeader => "header must be exactly `date,value`",
            ParseErrorKind::MalformedRow => "row must have exactly two fields",
            ParseErrorKind::MalformedDate => "malformed date, expected YYYY-MM",
            ParseErrorKind::NonIntegerValue => "value is not an integer",
            ParseErrorKind::CalendarGap => "calendar gap",
            ParseErrorKind::DuplicateMonth => "duplicate or out-of-order month",
            ParseErrorKind::EmptyBody => "no data rows",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}: {text:?}")]
    Parse {
        line: usize,
        kind: ParseErrorKind,
        text: String,
    },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),

    #[error("robust dispersion (MAD) of the remainder is zero")]
    ZeroDispersion,

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("series does not match the bundled {expected} fixture (digest {found})")]
    WrongFixture {
        expected: &'static str,
        found: String,
    },

    #[error("unsupported size {0}: length must be a power of two >= 64")]
    UnsupportedSize(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("circulant embedding failed: minimum eigenvalue {min_eigenvalue:e}")]
    SynthesisFailure { min_eigenvalue: f64 },

    #[error("no transition in curve: fitted amplitude {amplitude:.4} below 0.05")]
    NoTransition { amplitude: f64 },

    #[error("comparison figure requires two reports, got {0}")]
    MissingComparison(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{stage} stage: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Tags an error with the pipeline stage that produced it.
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub(crate) fn insufficient(needed: usize, got: usize) -> Self {
        Error::InsufficientData { needed, got }
    }
}
