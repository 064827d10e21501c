//! Mining pipeline for autonomous-vehicle disengagement-report CSVs:
//! ingestion and dedup, text preprocessing, LDA topic modeling, k-Means
//! clustering with silhouette selection, t-SNE projection, and report
//! generation.
//!
//! The numeric kernels ([`lda`], [`cluster`], [`tsne`]) are generic over the
//! scalar type via [`num::Scalar`]; the aliases below pin the `f64`
//! instantiations the pipeline uses.

#![forbid(unsafe_code)]

pub mod cluster;
pub mod error;
pub mod fixture;
pub mod ingest;
pub mod lda;
pub mod num;
pub mod plot;
pub mod report;
pub mod rng;
pub mod textprep;
pub mod tsne;

pub use error::{Error, Result};

/// `f64` model used by the command-line pipeline.
pub type LdaModel = lda::LdaModel<f64>;
/// `f64` clustering result used by the command-line pipeline.
pub type ClusteringResult = cluster::ClusteringResult<f64>;
/// `f64` silhouette sweep used by the command-line pipeline.
pub type SilhouetteReport = cluster::SilhouetteReport<f64>;
/// `f64` 2-D embedding used by the command-line pipeline.
pub type Embedding2D = tsne::Embedding2D<f64>;
/// Matrix of `f64` features (documents × topics, points × dims, ...).
pub type Matrix = ndarray::Array2<f64>;
