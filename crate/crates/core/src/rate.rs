//! Average achievable data rate of a single hop.
//!
//! The rate is `B · E[log2(1 + SNR · h_PE)]` with states below the detection
//! threshold contributing nothing. Three routes are provided: the closed form
//! through [`special::upsilon_reduced`], direct quadrature of the truncated
//! expectation, and Monte Carlo over sampled pointing errors.

use std::f64::consts::LN_2;

use crate::beam::BeamParams;
use crate::channel::far_field_state;
use crate::error::{non_negative, positive, OislError, Result};
use crate::montecarlo;
use crate::pointing::PointingModel;
use crate::special;

/// Transmit power, receiver and noise figures of a hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Hz.
    pub bandwidth: f64,
    /// W.
    pub p_t: f64,
    pub eta: f64,
    pub h_pl: f64,
    pub sigma_n2: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        positive("bandwidth", self.bandwidth)?;
        positive("p_t", self.p_t)?;
        positive("eta", self.eta)?;
        positive("h_pl", self.h_pl)?;
        positive("sigma_n2", self.sigma_n2)?;
        Ok(())
    }

    /// `h_PL · η · P_T / σ_n²`.
    pub fn snr(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.h_pl * self.eta * self.p_t / self.sigma_n2)
    }
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            bandwidth: 10e9,
            p_t: 0.5,
            eta: 0.5,
            h_pl: 0.9,
            sigma_n2: 1e-12,
        }
    }
}

pub fn snr(budget: &LinkBudget) -> Result<f64> {
    budget.snr()
}

/// Everything that determines the rate of a hop except its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    pub beam: BeamParams,
    pub pointing: PointingModel,
    /// Detector radius, m.
    pub w_d: f64,
    /// Dimensionless detection threshold.
    pub h_th: f64,
    pub budget: LinkBudget,
}

impl LinkModel {
    pub fn with_frequency(&self, frequency: f64) -> Result<Self> {
        Ok(Self {
            beam: self.beam.with_frequency(frequency)?,
            ..*self
        })
    }

    /// Per-hop channel constants at hop length `delta`, with `σ_s` frozen at `σ_s(δ)`.
    pub fn hop(&self, delta: f64) -> Result<HopChannel> {
        let delta = positive("delta", delta)?;
        let w_d = positive("w_d", self.w_d)?;
        non_negative("h_th", self.h_th)?;
        let sigma_s = self.pointing.sigma_s(delta)?;
        let tan_theta = self.beam.divergence().tan();
        let xi = tan_theta * tan_theta / (4.0 * sigma_s * sigma_s);
        let gamma = xi * delta * delta;
        Ok(HopChannel {
            delta,
            sigma_s,
            xi,
            gamma,
            a0: w_d * w_d / (2.0 * sigma_s * sigma_s * gamma),
            w_z: delta * tan_theta,
        })
    }
}

/// Channel constants of one hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopChannel {
    pub delta: f64,
    pub sigma_s: f64,
    /// `tan²θ / (4σ_s²)`.
    pub xi: f64,
    /// `ξ δ²`, the power-law exponent of `h_PE`.
    pub gamma: f64,
    /// Peak collected fraction `w_d² / (2σ_s² ξ δ²)`.
    pub a0: f64,
    /// Far-field waist `δ tanθ`.
    pub w_z: f64,
}

/// Rate of a hop and whether it is in outage (`h_th ≥ A0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// bit/s.
    pub rate: f64,
    pub outage: bool,
}

impl RateEstimate {
    const OUTAGE: Self = Self { rate: 0.0, outage: true };
}

/// Closed-form average rate `B (Υ(A0) - Υ(h_th)) / (A0^γ ln 2)`.
///
/// Evaluated as `B/ln2 · (U(A0) - (h_th/A0)^γ U(h_th))` where `U = Υ/x^γ`, which
/// keeps the powers of `A0` and `h_th` bounded.
pub fn avg_rate_analytic(delta: f64, model: &LinkModel) -> Result<RateEstimate> {
    let hop = model.hop(delta)?;
    let snr = model.budget.snr()?;
    let h_th = model.h_th;
    if h_th >= hop.a0 {
        return Ok(RateEstimate::OUTAGE);
    }
    let top = special::upsilon_reduced(hop.a0, hop.gamma, snr)?;
    let bottom = if h_th > 0.0 {
        (hop.gamma * (h_th / hop.a0).ln()).exp() * special::upsilon_reduced(h_th, hop.gamma, snr)?
    } else {
        0.0
    };
    let rate = model.budget.bandwidth * (top - bottom) / LN_2;
    Ok(RateEstimate {
        rate: rate.max(0.0),
        outage: false,
    })
}

/// `B/ln2 · γ A0^{-γ} Ω` with `Ω` from [`special::omega_quadrature`].
pub fn avg_rate_quadrature(delta: f64, model: &LinkModel) -> Result<RateEstimate> {
    let hop = model.hop(delta)?;
    let snr = model.budget.snr()?;
    if model.h_th >= hop.a0 {
        return Ok(RateEstimate::OUTAGE);
    }
    // Integrate over y / A0 so that A0^-γ never has to be formed on its own.
    let omega = special::omega_quadrature(model.h_th / hop.a0, 1.0, hop.gamma, snr * hop.a0)?;
    Ok(RateEstimate {
        rate: model.budget.bandwidth / LN_2 * hop.gamma * omega,
        outage: false,
    })
}

/// Monte Carlo rate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloRate {
    pub rate: f64,
    pub std_error: f64,
    pub outage: bool,
    pub samples: usize,
}

/// Minimum sample count accepted by [`avg_rate_montecarlo`].
pub const MIN_RATE_SAMPLES: usize = 100_000;

/// Empirical mean of `B log2(1 + snr·h)` over `h = A0 exp(-2r²/w_z²)`,
/// `r ~ Rayleigh(σ_s(δ))`, with `h < h_th` contributing zero.
pub fn avg_rate_montecarlo(seed: u64, n: usize, delta: f64, model: &LinkModel) -> Result<MonteCarloRate> {
    if n < MIN_RATE_SAMPLES {
        return Err(OislError::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "rate Monte Carlo needs at least 10^5 samples",
        });
    }
    let hop = model.hop(delta)?;
    let snr = model.budget.snr()?;
    let h_th = model.h_th;
    let outage = h_th >= hop.a0;
    let (a0, w_z, sigma) = (hop.a0, hop.w_z, hop.sigma_s);
    let [s1, s2] = montecarlo::chunked_sum(seed, n, |rng| {
        let h = far_field_state(montecarlo::radial(rng, sigma), a0, w_z);
        if h >= h_th {
            let v = (snr * h).ln_1p() / LN_2;
            [v, v * v]
        } else {
            [0.0, 0.0]
        }
    });
    let m = n as f64;
    let mean = s1 / m;
    let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    let b = model.budget.bandwidth;
    Ok(MonteCarloRate {
        rate: b * mean,
        std_error: b * (var / m).sqrt(),
        outage,
        samples: n,
    })
}
