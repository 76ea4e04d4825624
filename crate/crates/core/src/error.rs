use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("square root of a negative interval")]
    NegativeSqrt,
    #[error("radicand straddles zero beyond the clamp tolerance")]
    RadicandAmbiguous,
    #[error("invalid interval endpoints")]
    InvalidEndpoints,
    #[error("precision must be at least 53 bits, got {0}")]
    PrecisionTooLow(u32),
    #[error("could not parse decimal literal {0:?}")]
    Parse(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("leading block determinant has no certified sign")]
    SingularBlock,
    #[error("forced zero at {0} is not certified")]
    ForcedZero(String),
    #[error("k(r) is unbounded: r is at the upper end r*")]
    AtRStar,
    #[error("bisection stalled: sign of k - j ambiguous on a box of width {0:e}")]
    BisectionStall(f64),
    #[error("index {0} is resonant: m - k contains zero")]
    ResonantIndex(usize),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("origin amplitude must be nonzero")]
    ZeroAmplitude,
    #[error("eigenvector data degenerate: {0}")]
    DegenerateEigenvector(String),
    #[error("slope denominator W1 + Z1 contains zero")]
    DegenerateSlope,
    #[error("point outside chart domain: {0}")]
    OutOfChart(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shooting bracket invalid: {0}")]
    BracketInvalid(String),
    #[error("series radius too small for seeding")]
    SeriesRadiusTooSmall,
    #[error("unknown task id {0:?}")]
    UnknownTask(String),
}

pub type Result<T> = std::result::Result<T, Error>;
