use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported composition: {0}")]
    UnsupportedComposition(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("decomposition failure: {0}")]
    DecompositionFailure(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("sampling aborted: {0}")]
    Sampling(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
