use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-invertible dilation")]
    SingularMatrix,
    #[error("length mismatch: {0} frequency shifts vs {1} spatial shifts")]
    LengthMismatch(usize, usize),
    #[error("empty region")]
    EmptyRegion,
    #[error("invalid region index {0}")]
    InvalidIndex(usize),
    #[error("epsilon {0} out of range")]
    EpsilonOutOfRange(f64),
    #[error("invalid smoothing config: {0}")]
    InvalidConfig(String),
    #[error("triple overlap: {0}")]
    TripleOverlap(String),
    #[error("grid size {0} must be a positive multiple of 4")]
    GridSize(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("image size {n} is not a multiple of 2^(levels+1) for {levels} levels")]
    ImageSize { n: usize, levels: usize },
    #[error("variant mismatch: pyramid is {pyramid}, design is {design}")]
    VariantMismatch { pyramid: String, design: String },
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
