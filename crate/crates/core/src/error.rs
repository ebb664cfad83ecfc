use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input image")]
    EmptyImage,
    #[error("mask length {len} does not match {height}x{width}")]
    MaskSize {
        height: usize,
        width: usize,
        len: usize,
    },
    #[error("moments of empty silhouette")]
    EmptyMoments,
    #[error("empty silhouette: {0}")]
    EmptySilhouette(&'static str),
    #[error("degenerate shape")]
    DegenerateShape,
    #[error("no templates")]
    NoTemplates,
    #[error("empty frame list")]
    EmptySequence,
    #[error("cannot normalize empty frame")]
    NormalizeEmpty,
    #[error("degenerate geometry")]
    DegenerateGeometry,
    #[error("degenerate batch statistics")]
    DegenerateBatch,
    #[error("no triplets in batch")]
    NoTriplets,
    #[error("zero-norm {0} row {1}")]
    ZeroNorm(&'static str, usize),
    #[error("non-finite value at coordinate {0}")]
    NonFinite(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
