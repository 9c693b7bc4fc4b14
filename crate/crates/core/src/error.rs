use std::io;

use thiserror::Error;

use crate::census::TriadType;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("unknown node id `{0}`")]
    UnknownNode(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("triad of type {0} has no transitive triples")]
    NotTransitive(TriadType),

    #[error("graph contains no transitive triads")]
    NoTransitiveTriads,

    #[error("undefined result: {0}")]
    Undefined(String),

    #[error("oracle refuses graphs with {0} nodes (limit {limit})", limit = crate::oracle::MAX_NODES)]
    OracleTooLarge(usize),

    #[error("input file not found: {}", .0.display())]
    MissingInput(std::path::PathBuf),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
