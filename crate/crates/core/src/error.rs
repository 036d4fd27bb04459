use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive enumeration was refused because it exceeds the
    /// configured bound. `cost` is the number of candidates it would visit.
    #[error("{what}: {size} exceeds the configured bound {bound} (about {cost:.3e} candidates)")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
        cost: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
