use thiserror::Error;

/// Errors raised by the capacity toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A channel or state was built from invalid parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// The requested operation is not available for this channel.
    #[error("unsupported channel `{channel}`: {reason}")]
    Unsupported { channel: String, reason: String },

    /// Numerical routine failed (no bracket, NaN, broken concavity guard).
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            domain: "[0, 1]",
        })
    }
}
