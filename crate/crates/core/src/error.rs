use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Shapes or dimensions of the inputs do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The point is too close to the ideal boundary of the ball.
    #[error("point with norm {norm} is too close to the unit sphere")]
    BoundaryDegenerate { norm: f64 },

    /// Direction `x/|x|` requested at the origin.
    #[error("direction is undefined at the origin")]
    UndefinedDirection,

    /// A formula hit one of its poles (coth at t = 0, r = 0 or r = 1, ...).
    #[error("singularity: {0}")]
    Singularity(String),

    /// Query too close to a pole of the spherical chart.
    #[error("point is within {tolerance} rad of a pole of the spherical chart")]
    CoordinateSingularity { tolerance: f64 },

    /// Degenerate area element of a parametrized surface.
    #[error("surface chart is not an immersion at ({s}, {t})")]
    Regularity { s: f64, t: f64 },

    /// Shooting found no slope bracketing the terminal boundary value.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// The integration blew up; `t` is the last time with a valid state.
    #[error("integration diverged after t = {t}")]
    Divergence { t: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
