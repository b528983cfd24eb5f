use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Reasons two segmentations cannot be compared position by position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    /// Token sequences diverge. A `None` token means that side ran out first.
    #[error("token mismatch at position {position}: {left:?} vs {right:?}")]
    TokenMismatch {
        position: usize,
        left: Option<String>,
        right: Option<String>,
    },
    #[error("boundary vector length {found} does not match transcript length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("document id {found:?} does not match {expected:?}")]
    DocumentMismatch { expected: String, found: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("no tokens left after normalization")]
    EmptyTranscript,

    #[error(transparent)]
    Alignment(#[from] AlignmentError),

    #[error("at least 2 references are required, found {found}")]
    TooFewReferences { found: usize },

    #[error("{0} is not a reference segmentation")]
    NotAReference(String),

    #[error("no boundaries in {0}")]
    NoBoundaries(String),

    #[error("consensus threshold {threshold} outside 1..={references}")]
    BadThreshold { threshold: usize, references: usize },

    #[error("Fleiss' kappa undefined: every rating falls in one category")]
    DegenerateAgreement,

    #[error("correlation undefined: {0} has zero variance")]
    ConstantSequence(&'static str),

    #[error(
        "correlation needs two equal-length sequences of at least 2 values, got {left} and {right}"
    )]
    SampleSize { left: usize, right: usize },

    #[error("document {doc_id} has {found} reference file(s), at least 2 are required")]
    MissingReferences { doc_id: String, found: usize },

    #[error("unknown report format {0:?} (expected table, json or csv)")]
    UnknownFormat(String),

    #[error("malformed document {path}: {reason}")]
    MalformedDocument { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{doc_id}: {source}")]
    Document {
        doc_id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{} document(s) failed", .0.len())]
    Corpus(Vec<Error>),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn in_document(self, doc_id: &str) -> Error {
        match self {
            Error::Document { .. } | Error::MissingReferences { .. } => self,
            other => Error::Document {
                doc_id: doc_id.to_string(),
                source: Box::new(other),
            },
        }
    }

    /// Short machine-readable kind tag, used by the CLI error list.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyTranscript => "EmptyTranscript",
            Error::Alignment(_) => "AlignmentError",
            Error::TooFewReferences { .. } => "TooFewReferences",
            Error::NotAReference(_) => "NotAReference",
            Error::NoBoundaries(_) => "NoBoundaries",
            Error::BadThreshold { .. } => "BadThreshold",
            Error::DegenerateAgreement => "DegenerateAgreement",
            Error::ConstantSequence(_) => "ConstantSequence",
            Error::SampleSize { .. } => "SampleSize",
            Error::MissingReferences { .. } => "MissingReferences",
            Error::UnknownFormat(_) => "UnknownFormat",
            Error::MalformedDocument { .. } => "MalformedDocument",
            Error::Io { .. } => "Io",
            Error::Document { source, .. } => source.kind(),
            Error::Corpus(_) => "Corpus",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}
