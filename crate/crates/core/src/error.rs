use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violates a precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested absolute error {requested:e} is unreachable; best achievable is {achievable:e}")]
    Precision { requested: f64, achievable: f64 },

    /// The evaluation cap was hit. `partial` holds whatever was accumulated.
    #[error("evaluation budget of {limit} exhausted after {used} evaluations (partial value {partial})")]
    Budget { limit: u64, used: u64, partial: f64 },

    #[error("least-squares design is rank deficient (pivot ratio {pivot_ratio:e})")]
    Conditioning { pivot_ratio: f64 },

    #[error("operation requires the anchor-log convention")]
    Convention,

    #[error("no bracket found; scanned slopes ranged over [{min}, {max}]")]
    NoBracket { min: f64, max: f64 },

    #[error("target {target} outside the attained range [{min}, {max}]")]
    Range { target: f64, min: f64, max: f64 },

    /// The expected sign pattern of a geometric construction does not hold.
    #[error("geometry error: {reason}")]
    Geometry { reason: String, samples: Vec<(f64, f64)> },

    #[error("found {found} zeros where the main term predicts {expected:.2}; refine the scan grid")]
    MissedZeros { found: usize, expected: f64 },

    #[error("zero list ends at {last} but coverage up to {needed} is required")]
    Coverage { last: f64, needed: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn geometry(reason: impl Into<String>, samples: Vec<(f64, f64)>) -> Self {
        Error::Geometry {
            reason: reason.into(),
            samples,
        }
    }
}
