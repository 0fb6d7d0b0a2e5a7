use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grids are not compatible")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("linear case excluded: beta = 1 admits Nikodym-type counterexamples")]
    LinearCase,

    #[error("inadmissible curve parameters: {0}")]
    Inadmissible(String),

    #[error("scale {scale} is below grid resolution {cell}; use N >= {min_n}")]
    Unresolvable { scale: f64, cell: f64, min_n: usize },

    #[error("window is not dyadically aligned at level {level}")]
    Misaligned { level: i32 },

    #[error("ratio undefined: input has zero L^p norm")]
    ZeroNorm,

    #[error("no window reaches density {target}; best ratio {best}")]
    NoDenseWindow { target: f64, best: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
