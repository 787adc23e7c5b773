use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by geometry, contour, simplification and metric operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polyline needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("closed polyline must end with an exact copy of its first point")]
    NotClosed,
    #[error("ring is not closed")]
    RingNotClosed,
    #[error("consecutive duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("polyline has zero arc length")]
    ZeroArcLength,
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("limit must be at least 2, got {0}")]
    InvalidLimit(usize),
    #[error("exterior ring must be anti-clockwise (positive signed area)")]
    ExteriorNotCcw,
    #[error("interior ring must be clockwise (negative signed area)")]
    InteriorNotCw,
    #[error("mask dimensions must be positive")]
    EmptyMaskDimensions,
    #[error("mask data length {got} does not match {width}x{height}")]
    MaskSizeMismatch { width: usize, height: usize, got: usize },
    #[error("mask values must be 0 or 1, found {0}")]
    MaskValueOutOfRange(u8),
    #[error("mask has no foreground pixels")]
    EmptyMask,
    #[error("mask has {0} foreground components, expected exactly one")]
    MultipleComponents(usize),
    #[error("window size must be at least 2, got {0}")]
    InvalidWindowSize(usize),
    #[error("inconsistent window records: {0}")]
    InconsistentWindows(String),
    #[error("lambda must be non-negative and finite, got {0}")]
    InvalidLambda(f64),
    #[error("k_max must be at least 2, got {0}")]
    InvalidKMax(usize),
    #[error("tolerance must be non-negative and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("brute force enumeration is capped at 20 points, got {0}")]
    BruteForceTooLong(usize),
    #[error("selection index {0} is out of range for a polyline of {1} points")]
    IndexOutOfRange(usize, usize),
    #[error("selection indices must be strictly increasing")]
    IndicesNotIncreasing,
    #[error("matched point sequences differ in length: {pred} vs {gt}")]
    MatchedLengthMismatch { pred: usize, gt: usize },
    #[error("beta must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("canvas of {width}x{height} at supersample {supersample} exceeds the sample cap {cap}")]
    CanvasTooLarge { width: usize, height: usize, supersample: usize, cap: usize },
    #[error("canvas dimensions and supersample must be positive")]
    InvalidCanvas,
    #[error("ground truth has no vertices")]
    NoGtVertices,
    #[error("contour has zero length")]
    DegenerateContour,
    #[error("per-image lists differ in length: {pred} vs {gt}")]
    ImageCountMismatch { pred: usize, gt: usize },
}
