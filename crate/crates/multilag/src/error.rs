use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Errors are `Clone` so an aborted trajectory can carry the error that
/// stopped it alongside the partial data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("|v| = {v} is at or beyond the speed limit c = {c}")]
    SpeedLimitExceeded { v: f64, c: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("velocity Hessian {hessian:.3e} is below the floor {floor:.3e}; cannot extract acceleration")]
    DegenerateHessian { hessian: f64, floor: f64 },

    #[error("trajectories are not on the same time grid")]
    GridMismatch,

    #[error("initial energy {0:.3e} is too close to zero for a hierarchy Hamiltonian run")]
    DegenerateEnergy(f64),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    #[error("quadrature did not converge within {0} subdivisions")]
    QuadratureDidNotConverge(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
