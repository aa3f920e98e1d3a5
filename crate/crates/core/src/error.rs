use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    /// Every candidate of a weighted draw had weight zero.
    #[error("all candidate weights are zero")]
    ZeroWeight,

    #[error("no convergence within {0} steps")]
    NoConvergence(u64),

    #[error("rerun cap of {0} attempts exhausted without hitting a potential minimizer")]
    RerunCapExceeded(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
