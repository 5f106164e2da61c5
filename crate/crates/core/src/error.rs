//! Error type shared by every pricing routine.

use thiserror::Error;

/// Failure modes of the pricing, validation and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    /// A model, contract or numerical setting is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The Poisson mixture hit its term cap before the tail mass fell below target.
    #[error("Poisson series truncated at {terms} terms with remaining tail mass {tail:e}")]
    SeriesTruncation { terms: usize, tail: f64 },

    /// A backend could not certify the requested accuracy.
    #[error("{backend} backend missed tolerance {target:e}: achieved error estimate {achieved:e}")]
    ToleranceNotMet {
        backend: &'static str,
        target: f64,
        achieved: f64,
    },

    /// Zero time to maturity where a strictly positive horizon is required.
    #[error("time to maturity is zero; the transition law is a point mass")]
    DegenerateMaturity,

    /// A sensitivity was requested exactly on a point mass of the transition law.
    /// `delta_jump` is the size of the jump in the option delta across the kink.
    #[error("evaluation point l = {l} sits on an atom of the transition law (delta jumps by {delta_jump:e}); query l +/- eps")]
    AtomKink { l: f64, delta_jump: f64 },

    /// A computation produced NaN or an infinity.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
}

impl PricingError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, PricingError>;

pub(crate) fn ensure_finite(value: f64, context: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(PricingError::NonFinite { context })
    }
}

pub(crate) fn require(
    ok: bool,
    name: &'static str,
    reason: impl FnOnce() -> String,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(PricingError::invalid(name, reason()))
    }
}

pub(crate) fn finite_param(name: &'static str, value: f64) -> Result<f64> {
    require(value.is_finite(), name, || format!("must be finite, got {value}"))?;
    Ok(value)
}

pub(crate) fn nonneg_param(name: &'static str, value: f64) -> Result<f64> {
    require(value.is_finite() && value >= 0.0, name, || {
        format!("must be finite and non-negative, got {value}")
    })?;
    Ok(value)
}

pub(crate) fn positive_param(name: &'static str, value: f64) -> Result<f64> {
    require(value.is_finite() && value > 0.0, name, || {
        format!("must be finite and positive, got {value}")
    })?;
    Ok(value)
}
