use thiserror::Error;

/// Errors raised by the geometric kernel and the operations built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("zero vector is not a projective point")]
    ZeroVector,

    #[error("point is real within tolerance; no unique real trace line")]
    RealPoint,

    #[error("points are not collinear")]
    Collinearity,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("point lies on the hyperplane at infinity of the chart")]
    Infinity,

    #[error("point is not in the interior of the domain")]
    NotInterior,

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("point lies inside the tube; no separating hyperplane exists")]
    InsideTube,

    #[error("point is not on the tube boundary")]
    NotBoundary,

    #[error("operation requires a {0} representation")]
    Representation(&'static str),

    #[error("the real trace line misses the base domain")]
    EmptySlice,

    #[error("point lies outside the tube")]
    OutsideTube,

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("input must be non-real")]
    RealInput,

    #[error("tangent vector has positive magnitude but zero direction")]
    ZeroDirection,

    #[error("group element does not preserve the domain: {0}")]
    GroupValidation(String),

    #[error("raster window too small: {0}")]
    Resolution(String),

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("domain spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
