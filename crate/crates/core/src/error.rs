use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;
use crate::mobility::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("transmission range {range} m exceeds the chprob normalizer tr_max = {tr_max} m")]
    RangeAboveMax { range: f64, tr_max: f64 },

    #[error("node {0} is already part of the cluster assignment")]
    DuplicateNode(NodeId),

    #[error("node {0} is not present in the neighbor graph")]
    UnknownNode(NodeId),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("unknown figure `{0}` (expected clusters, connectivity, dominant, throughput, pdr or delay)")]
    UnknownFigure(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
