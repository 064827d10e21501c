//! Error type shared across the pipeline stages.

use thiserror::Error;

/// Errors produced by ingestion, preprocessing, modeling, and reporting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: header is missing required column '{column}'")]
    MissingColumn { path: String, column: String },

    #[error("{path}:{row}: column '{column}' has unrecognized value '{value}'")]
    EnumParse {
        path: String,
        row: usize,
        column: String,
        value: String,
    },

    #[error("vocabulary is empty")]
    EmptyVocabulary,

    #[error("corpus contains no tokens")]
    EmptyCorpus,

    #[error("description id {0} out of range")]
    DescriptionIdOutOfRange(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("k={k} is invalid for {n} points")]
    InvalidClusterCount { k: usize, n: usize },

    #[error("input contains non-finite values")]
    NonFiniteInput,

    #[error("silhouette requires at least 2 distinct clusters")]
    TooFewClusters,

    #[error("description id {0} has no cluster assignment")]
    MissingAssignment(usize),

    #[error("record at {file}:{row} has a description not present in the unique table")]
    UnknownDescription { file: String, row: usize },

    #[error("cluster {0} does not exist")]
    UnknownCluster(usize),

    #[error("rules file error: {0}")]
    Rules(String),
}

pub type Result<T> = std::result::Result<T, Error>;
