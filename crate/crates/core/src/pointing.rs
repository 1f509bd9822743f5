//! Radial pointing-error statistics.
//!
//! Horizontal and vertical misalignment are independent zero-mean normals with
//! per-axis standard deviation `σ_s`; the radial deviation is then Rayleigh with
//! scale `σ_s`. The scale may grow with hop length to reflect harder tracking.

use crate::error::{non_negative, positive, OislError, Result};
use crate::montecarlo;

/// Distance dependence of the jitter scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaMode {
    Constant,
    /// `σ_s(δ) = σ_s0 · exp(k0 · δ / d0)`.
    #[default]
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingModel {
    sigma_s0: f64,
    k0: f64,
    d0: f64,
    mode: SigmaMode,
}

impl PointingModel {
    /// `sigma_s0` and `d0` in metres, `k0` dimensionless.
    pub fn new(sigma_s0: f64, k0: f64, d0: f64, mode: SigmaMode) -> Result<Self> {
        Ok(Self {
            sigma_s0: positive("sigma_s0", sigma_s0)?,
            k0: non_negative("k0", k0)?,
            d0: positive("d0", d0)?,
            mode,
        })
    }

    /// Range-independent jitter with scale `sigma`.
    pub fn constant(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0.0, 1.0, SigmaMode::Constant)
    }

    pub fn exponential(sigma_s0: f64, k0: f64, d0: f64) -> Result<Self> {
        Self::new(sigma_s0, k0, d0, SigmaMode::Exponential)
    }

    pub fn sigma_s0(&self) -> f64 {
        self.sigma_s0
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn mode(&self) -> SigmaMode {
        self.mode
    }

    /// Jitter scale at hop length `delta` (metres).
    pub fn sigma_s(&self, delta: f64) -> Result<f64> {
        let delta = non_negative("delta", delta)?;
        Ok(match self.mode {
            SigmaMode::Constant => self.sigma_s0,
            SigmaMode::Exponential => self.sigma_s0 * (self.k0 * delta / self.d0).exp(),
        })
    }
}

impl Default for PointingModel {
    /// `σ_s0 = 2 m`, `k0 = 0.1`, `d0 = 100 km`, exponential growth.
    fn default() -> Self {
        Self {
            sigma_s0: 2.0,
            k0: 0.1,
            d0: 100e3,
            mode: SigmaMode::Exponential,
        }
    }
}

pub fn sigma_s(model: &PointingModel, delta: f64) -> Result<f64> {
    model.sigma_s(delta)
}

/// Rayleigh density `(r/σ²) exp(-r²/(2σ²))`.
pub fn rayleigh_pdf(r: f64, sigma: f64) -> Result<f64> {
    let sigma = positive("sigma", sigma)?;
    let r = non_negative("r", r)?;
    let s2 = sigma * sigma;
    Ok(r / s2 * (-r * r / (2.0 * s2)).exp())
}

/// Rayleigh distribution function `1 - exp(-r²/(2σ²))`.
pub fn rayleigh_cdf(r: f64, sigma: f64) -> Result<f64> {
    let sigma = positive("sigma", sigma)?;
    let r = non_negative("r", r)?;
    Ok(-(-r * r / (2.0 * sigma * sigma)).exp_m1())
}

/// `n` radial deviations with scale `sigma`, reproducible per `seed`.
pub fn sample_radial(seed: u64, sigma: f64, n: usize) -> Result<Vec<f64>> {
    let sigma = positive("sigma", sigma)?;
    if n == 0 {
        return Err(OislError::EmptySample);
    }
    Ok(montecarlo::chunked_samples(seed, n, |rng| montecarlo::radial(rng, sigma)))
}
