use thiserror::Error;

use crate::geometry::FourVector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix that does not follow the generator layout.
    #[error("matrix violates generator structure (max deviation {max_deviation:.3e}, tolerance {tol:.3e})")]
    Structural { max_deviation: f64, tol: f64 },

    #[error("field map produced a non-finite value at x = {position}")]
    Evaluation { position: FourVector },

    /// Inconsistent combination of otherwise valid settings.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at key `{key}`: {message}")]
    Parse { key: String, message: String },

    /// The integrator left the mass shell or produced an unusable state.
    #[error("integrator abort at step {step} (tau = {tau}): {reason}")]
    Abort {
        step: usize,
        tau: f64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
