use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OislError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The far-field waist vanishes at zero range.
    #[error("singular geometry: {0}")]
    SingularGeometry(&'static str),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// Argument outside the support `(0, upper]` of a density.
    #[error("argument {value:e} outside the support (0, {upper:e}]")]
    Domain { value: f64, upper: f64 },

    #[error("numerical failure in {context}: achieved error bound {achieved:e}")]
    NumericalFailure {
        context: &'static str,
        achieved: f64,
    },

    #[error("sample size must be at least one")]
    EmptySample,
}

pub type Result<T> = std::result::Result<T, OislError>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(OislError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(OislError::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
