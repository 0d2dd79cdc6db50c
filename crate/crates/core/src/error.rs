use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("region [{a}, {b}] x [{c}, {d}] contains no lattice vertex")]
    EmptyRegion { a: f64, b: f64, c: f64, d: f64 },

    #[error("invalid rectangle: need a < b and c < d")]
    InvalidRectangle,

    #[error("invalid unit cell: {0}")]
    InvalidUnitCell(String),

    #[error("region is disconnected")]
    Disconnected,

    #[error("region has no bounded face")]
    NoBoundedFace,

    #[error("planar embedding error: {0}")]
    Embedding(String),

    #[error("unsupported lattice for this operation: {0}")]
    UnsupportedLattice(String),

    #[error("enumeration capacity exceeded: {size} exceeds the cap of {cap}")]
    Capacity { size: u64, cap: u64 },

    #[error("configuration has {got} edges but the region has {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("conditioning on an event of probability zero")]
    NullConditioning,

    #[error("event must be increasing for this operation")]
    NotIncreasing,

    #[error("event is unsatisfiable")]
    Unsatisfiable,

    #[error("empty side set for {0} crossing")]
    EmptySide(&'static str),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid monotonicity declaration: {0}")]
    InvalidMonotonicity(String),

    #[error("derivative formula is singular at p = {0}")]
    SingularDerivative(f64),

    #[error("no bracketing interval: {0}")]
    NoBracket(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
