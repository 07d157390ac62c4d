//! Library half of the `fpx` binary: configuration, result caching, report
//! types, the individual commands and the end-to-end reproduction pipeline.
//! The binary is a thin argument-parsing shell over these modules, so
//! integration tests can drive the same code paths in process.

pub mod cache;
pub mod commands;
pub mod config;
pub mod expected;
pub mod pipeline;
pub mod reports;

use fpx_core::abelianization::MatrixError;
use fpx_core::catalog::CatalogError;
use fpx_core::low_index::LiError;
use fpx_core::permgroup::{PermError, SearchError};
use fpx_core::rewriting::CayleyError;
use fpx_core::todd_coxeter::TcError;
use fpx_core::words::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("enumeration: {0}")]
    Tc(#[from] TcError),
    #[error("low index: {0}")]
    LowIndex(#[from] LiError),
    #[error("permutation group: {0}")]
    Perm(#[from] PermError),
    #[error("catalog: {0}")]
    Catalog(#[from] CatalogError),
    #[error("search: {0}")]
    Search(#[from] SearchError),
    #[error("cayley presentation: {0}")]
    Cayley(#[from] CayleyError),
    #[error("matrix: {0}")]
    Matrix(#[from] MatrixError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("stage {stage}: {message}")]
    Stage { stage: String, message: String },
}

impl CliError {
    pub fn stage(stage: &str, message: impl Into<String>) -> CliError {
        CliError::Stage {
            stage: stage.to_string(),
            message: message.into(),
        }
    }
}
