use thiserror::Error;

/// Errors raised by the library. Indices in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty group: p + q must be at least 1")]
    EmptyGroup,
    #[error("t = {t} out of range 0..={max}")]
    TOutOfRange { t: usize, max: usize },
    #[error("root e_{0} - e_{1} is compact; no Cayley transform")]
    CompactRoot(usize, usize),
    #[error("root e_{0} - e_{1} is not a root of this group")]
    NotARoot(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("roots e_{0} and e_{1} share an index block; not strongly orthogonal")]
    OverlappingBlocks(usize, usize),
    #[error("singular point: diagonal entries h{0} and h{1} coincide")]
    Singular(usize, usize),
    #[error("non-regular point: hyperbolic coordinate X{0} vanishes")]
    NonRegular(usize),
    #[error("pole on contour: |a| = {0} is too close to 1")]
    PoleOnContour(f64),
    #[error("outside the Cayley domain: det(g - 1) vanishes")]
    CayleyDomain,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by the evaluation point rather than by malformed arguments.
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Singular(..) | Error::NonRegular(_))
    }
}
