//! Static analysis of preprocessed C++ source trees.
//!
//! The pipeline lexes and parses every source and header artifact under a
//! product root into a semantic code model, computes traditional
//! (CLD/DIT/NOC) and product-line (NIT/NOA/CIR) source-code measures plus
//! nine characteristic counts, compares metric reports across product
//! versions, correlates the two measure families, and renders
//! deterministic treemap/bar-chart SVG and namespace/inheritance/include
//! DOT documents.
//!
//! Everything is deterministic: rerunning any stage on unchanged inputs
//! produces byte-identical files.

use std::path::PathBuf;

use thiserror::Error;

pub mod cli;
pub mod lexer;
pub mod metrics;
pub mod model;
pub mod parser;
pub mod pipeline;
pub mod store;
pub mod viz;

pub use model::CodeModel;
pub use pipeline::{analyze_tree, AnalyzeOptions};

/// Crate-wide error type. Analysis never fails on source *content*; these
/// are I/O, schema and usage failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unsupported model schema {found:?}, expected {expected:?}")]
    SchemaVersion { found: String, expected: String },
    #[error("model integrity violated: {0}")]
    Integrity(String),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("unknown metric name {0:?}")]
    UnknownMetric(String),
    #[error("unknown table {name:?}; valid tables: {valid}")]
    UnknownTable { name: String, valid: String },
    #[error("reports were not computed with the same plan; selection difference: {0}")]
    PlanMismatch(String),
    #[error("{0}")]
    Stats(String),
    #[error("run log line {line}: {message}")]
    RunLog { line: usize, message: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}
