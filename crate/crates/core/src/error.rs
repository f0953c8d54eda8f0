use thiserror::Error;

#[derive(Debug, Error)]
pub enum CogsError {
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("group mismatch: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("{0}")]
    Validation(String),
    #[error("construction impossible: {0}")]
    Construction(String),
    #[error("not canonicalizable at frequency {0}: all triple products vanish")]
    NotCanonicalizable(usize),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("unsupported slice: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CogsError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            CogsError::Io(_) => 4,
            CogsError::Numeric(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = CogsError> = std::result::Result<T, E>;
