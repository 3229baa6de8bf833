use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coupling profile: {0}")]
    InvalidProfile(String),

    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("eigensolver did not converge within {iterations} iterations (dimension {dim})")]
    NoConvergence { dim: usize, iterations: usize },

    #[error("sector with k = {k} excitations on {n_sites} sites has dimension C({n_sites},{k}) = {dim}, above the cap of {cap}")]
    SectorTooLarge {
        n_sites: usize,
        k: usize,
        dim: u128,
        cap: usize,
    },

    #[error("decay-curve minimizer hit its iteration cap ({iterations}) without converging")]
    FitNotConverged { iterations: usize },

    #[error("schema error at `{path}`: {reason}")]
    Schema { path: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn arg(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::InvalidProfile(_)
                | Error::InvalidArgument { .. }
                | Error::Schema { .. }
                | Error::Json(_)
                | Error::Io { .. }
                | Error::SectorTooLarge { .. }
        )
    }
}
