use thiserror::Error;

/// Errors raised across the library. Variants map one-to-one onto the
/// failure modes of the individual operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("finite-difference differential did not converge (relative change {change:.3e})")]
    StepTooLarge { change: f64 },
    #[error("cannot normalize the zero quaternion")]
    ZeroQuaternion,
    #[error("mapping-torus identification check failed (mismatch {0:.3e})")]
    GluingMismatch(f64),
    #[error("no packing center passes the distance filters for L = {0}")]
    PackingEmpty(f64),
    #[error("transport error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    StepTooCoarse { estimate: f64, tolerance: f64 },
    #[error("start point projects {0:.3e} away from the curve start")]
    FiberMismatch(f64),
    #[error("loop {index} encloses area {area:.3e} below the degeneracy threshold")]
    DegenerateLoop { index: usize, area: f64 },
    #[error("circle-map samples jump by {jump:.3} at index {index}")]
    LiftJump { index: usize, jump: f64 },
    #[error("area root not bracketed at base point {base:?}: F(t_max) = {value:.6} < {target:.6}")]
    RootNotBracketed {
        base: [f64; 3],
        value: f64,
        target: f64,
    },
    #[error("cumulative sector area not strictly increasing at angle {0:.6}")]
    NonMonotoneArea(f64),
    #[error("degree unresolved: raw value {raw:.6} (residual {residual:.3e})")]
    Unresolved { raw: f64, residual: f64 },
    #[error("preimage Jacobian determinant {0:.3e} too small for a regular value")]
    NotRegular(f64),
    #[error("exponent fit needs at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("volume bound violated: |deg| = {degree} > {bound:.6}")]
    ViolatedBound { degree: f64, bound: f64 },
    #[error("measured degree {measured} does not match det(H1 action)^2 = {expected}")]
    Mismatch { measured: i64, expected: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
