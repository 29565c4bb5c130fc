use thiserror::Error;

/// Errors raised while building systems or evaluating entropy set functions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element {0} does not belong to this group")]
    MixedGroups(String),
    #[error("free-group word exceeds the maximum length of {0}")]
    WordTooLong(usize),
    #[error("no canonical Følner sequence for {0}")]
    NoFolner(String),
    #[error("invalid subshift: {0}")]
    InvalidSubshift(String),
    #[error("the subshift is empty")]
    EmptySubshift,
    #[error("invalid support: {0}")]
    Support(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("invalid k-cover: {0}")]
    InvalidCover(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("invalid system description: {0}")]
    Description(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
