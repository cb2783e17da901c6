use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("point {re}+{im}i is not on the arc (distance {distance:e})")]
    NotOnArc { re: f64, im: f64, distance: f64 },

    #[error("index {index} matches {count} partners inside the adjustment guard at n = {n}")]
    AmbiguousAdjustment { n: usize, index: usize, count: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error(
        "quadrature did not converge after {doublings} doublings (last estimates {previous:e}, {last:e})"
    )]
    NoConvergence {
        doublings: usize,
        previous: f64,
        last: f64,
    },

    #[error("degenerate node sum: polynomial vanishes at every node")]
    DegenerateNodeSum,

    #[error("rank-deficient growth fit: {0}")]
    RankDeficient(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("duplicate nodes at indices {0} and {1}")]
    DuplicateNodes(usize, usize),

    #[error("charge located at evaluation point {0}")]
    AtCharge(usize),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
