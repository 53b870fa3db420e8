use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid pyramid: {0}")]
    InvalidPyramid(String),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("isotropic rank {requested} exceeds half the dimension of g_-1 ({max})")]
    IsotropicRankTooLarge { requested: usize, max: usize },
    #[error("toral point is not good: {0}")]
    NotGood(String),
    #[error("toral point is not integral")]
    NotIntegral,
    #[error("grading is not even (g_-1 is nonzero)")]
    NotEven,
    #[error("element has support outside U(p): {0}")]
    OutsideParabolic(String),
    #[error("element has nonzero cohomological degree {0}")]
    NonzeroDegree(i64),
    #[error("generator is not Whittaker invariant")]
    NotInvariant,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
