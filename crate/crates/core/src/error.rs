use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An eigenvalue of the embedding circulant is negative beyond the clipping tolerance.
    #[error(
        "circulant embedding is not nonnegative definite: minimal eigenvalue {min_eigenvalue:e} \
         (tolerance {tolerance:e}, embedding size {size})"
    )]
    Embedding {
        min_eigenvalue: f64,
        tolerance: f64,
        size: usize,
    },

    #[error("cholesky oracle failed: {0}")]
    Oracle(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("Clark recursion over {size} variables exceeds the size guard of {limit}; force it explicitly")]
    SizeGuard { size: usize, limit: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit status used by the command-line runner: 2 for usage problems, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::SizeGuard { .. } | Error::Io(_) => 2,
            Error::Embedding { .. }
            | Error::Oracle(_)
            | Error::Quadrature(_)
            | Error::Csv(_)
            | Error::Json(_) => 3,
        }
    }
}
