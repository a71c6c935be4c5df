use thiserror::Error;

use crate::propagator::PropagatorResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("transition probabilities disagree: {forward} vs {reverse}")]
    UnitarityViolation { forward: f64, reverse: f64 },

    #[error(
        "propagator did not converge after {doublings} step doublings \
         (best xi = {xi}, error estimate {error:.3e})",
        xi = best.xi,
        error = best.xi_error_estimate
    )]
    NotConverged {
        doublings: u32,
        best: Box<PropagatorResult>,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}
