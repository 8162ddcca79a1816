use thiserror::Error;

/// Errors shared by the geometry, entropy, and quadrature kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("not convex at vertex triple ({:?}, {:?}, {:?})", .a, .b, .c)]
    NotConvex {
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
    },

    #[error("origin is not strictly interior (signed edge distance {distance:e})")]
    OriginNotInterior { distance: f64 },

    #[error("direction must be a unit vector (|u| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureDidNotConverge { requested: f64, achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
