//! Pointing-error channel state `h_PE`.
//!
//! `h_PE(r)` is the fraction of transmitted power collected by a disc detector of
//! radius `w_d` whose centre sits `r` away from the beam axis. In the far-field
//! regime (`w_z ≫ w_d`) it reduces to `A0 · exp(-2r²/w_z²)` with
//! `A0 = 2 w_d²/w_z²`, and a Rayleigh-distributed `r` turns `h_PE` into a
//! power-law variable on `(0, A0]` with exponent `γ = w_z²/(4σ²)`.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::beam::{beam_waist, BeamParams, WaistMode};
use crate::error::{non_negative, positive, OislError, Result};
use crate::montecarlo;
use crate::quadrature::{integrate, integrate_with_breaks, QuadOptions};

/// Waist-to-detector ratio above which the far-field closed forms are trusted.
pub const FAR_FIELD_RATIO: f64 = 100.0;

/// Link geometry at one range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGeometry {
    /// Hop distance, m.
    pub z: f64,
    /// Beam waist at `z`, m.
    pub w_z: f64,
    /// Detector radius, m.
    pub w_d: f64,
    /// Per-axis pointing deviation at this range, m.
    pub sigma: f64,
}

impl ChannelGeometry {
    pub fn new(z: f64, w_z: f64, w_d: f64, sigma: f64) -> Result<Self> {
        Ok(Self {
            z: positive("z", z)?,
            w_z: positive("w_z", w_z)?,
            w_d: positive("w_d", w_d)?,
            sigma: positive("sigma", sigma)?,
        })
    }

    /// Geometry at range `z` with the far-field waist of `beam`.
    pub fn at_range(z: f64, beam: &BeamParams, w_d: f64, sigma: f64) -> Result<Self> {
        let w_z = beam_waist(positive("z", z)?, beam, WaistMode::FarField)?;
        Self::new(z, w_z, w_d, sigma)
    }

    /// Peak collected fraction `2 w_d² / w_z²`.
    pub fn a0(&self) -> f64 {
        2.0 * self.w_d * self.w_d / (self.w_z * self.w_z)
    }

    /// Power-law exponent `w_z² / (4σ²)`.
    pub fn gamma(&self) -> f64 {
        self.w_z * self.w_z / (4.0 * self.sigma * self.sigma)
    }

    pub fn waist_ratio(&self) -> f64 {
        self.w_z / self.w_d
    }

    pub fn is_far_field(&self) -> bool {
        self.waist_ratio() >= FAR_FIELD_RATIO
    }
}

/// Detector and transmitter quantities that set the detection threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec {
    /// Sensitivity threshold, W.
    pub p_th: f64,
    /// Responsivity.
    pub eta: f64,
    /// Deterministic path loss.
    pub h_pl: f64,
    /// Transmit power, W.
    pub p_t: f64,
}

/// Largest radial deviation that still meets a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialLimit {
    Radius(f64),
    /// Zero threshold: every deviation is detected.
    Unbounded,
    /// Threshold at or above `A0`: no deviation is detected.
    Outage,
}

/// Derived per-link statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStats {
    pub a0: f64,
    pub gamma: f64,
    pub h_th: f64,
    pub r_max: RadialLimit,
}

impl ChannelStats {
    pub fn new(geom: &ChannelGeometry, h_th: f64) -> Result<Self> {
        Ok(Self {
            a0: geom.a0(),
            gamma: geom.gamma(),
            h_th,
            r_max: r_max(geom, h_th)?,
        })
    }
}

/// Collected fraction from the overlap integral of the Gaussian intensity with
/// the detector disc, by nested adaptive quadrature in Cartesian coordinates.
///
/// The inner `y` integral runs over the upper half chord and is doubled, the
/// outer `x` integral covers the whole disc `[-w_d, w_d]`.
pub fn h_pe_exact(r: f64, geom: &ChannelGeometry) -> Result<f64> {
    let r = non_negative("r", r)?;
    let w2 = geom.w_z * geom.w_z;
    let wd = geom.w_d;
    let peak = 2.0 / (PI * w2);
    let inner_opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 2000,
    };
    let failure: Cell<Option<OislError>> = Cell::new(None);

    let chord = |x: f64| {
        let half = (wd * wd - x * x).max(0.0).sqrt();
        let along = (-2.0 * (x - r) * (x - r) / w2).exp();
        if half == 0.0 || along == 0.0 {
            return 0.0;
        }
        match integrate(|y| (-2.0 * y * y / w2).exp(), 0.0, half, inner_opts) {
            Ok(inner) => 2.0 * peak * along * inner.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };

    let mut breaks = vec![-wd];
    if r < wd {
        breaks.push(r);
    }
    breaks.push(wd);
    let outer = integrate_with_breaks(
        chord,
        &breaks,
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_intervals: 2000,
        },
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let value = outer?.value;
    if !value.is_finite() {
        return Err(OislError::NumericalFailure {
            context: "detector overlap integral",
            achieved: f64::INFINITY,
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Far-field collected fraction `A0 · exp(-2r²/w_z²)`.
///
/// Logs a warning when `w_z / w_d` is below [`FAR_FIELD_RATIO`].
pub fn h_pe_approx(r: f64, geom: &ChannelGeometry) -> Result<f64> {
    let r = non_negative("r", r)?;
    if !geom.is_far_field() {
        log::warn!(
            "w_z/w_d = {:.3} is below {FAR_FIELD_RATIO}; far-field channel state is approximate",
            geom.waist_ratio()
        );
    }
    Ok(far_field_state(r, geom.a0(), geom.w_z))
}

#[inline]
pub(crate) fn far_field_state(r: f64, a0: f64, w_z: f64) -> f64 {
    a0 * (-2.0 * r * r / (w_z * w_z)).exp()
}

/// Dimensionless detection threshold `p_th / (h_PL η P_T)`.
pub fn h_threshold(det: &DetectorSpec) -> Result<f64> {
    let p_th = non_negative("p_th", det.p_th)?;
    let eta = positive("eta", det.eta)?;
    let h_pl = positive("h_pl", det.h_pl)?;
    let p_t = positive("p_t", det.p_t)?;
    if eta > 1.0 {
        return Err(OislError::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "responsivity must not exceed one",
        });
    }
    if h_pl > 1.0 {
        return Err(OislError::InvalidParameter {
            name: "h_pl",
            value: h_pl,
            reason: "path loss must not exceed one",
        });
    }
    Ok(p_th / (h_pl * eta * p_t))
}

/// Radial deviation at which the far-field channel state falls to `h_th`.
pub fn r_max(geom: &ChannelGeometry, h_th: f64) -> Result<RadialLimit> {
    let h_th = non_negative("h_th", h_th)?;
    let a0 = geom.a0();
    Ok(if h_th == 0.0 {
        RadialLimit::Unbounded
    } else if h_th >= a0 {
        if h_th == a0 {
            RadialLimit::Radius(0.0)
        } else {
            RadialLimit::Outage
        }
    } else {
        let w2 = geom.w_z * geom.w_z;
        RadialLimit::Radius((0.5 * w2 * (a0 / h_th).ln()).sqrt())
    })
}

/// Power-law density of `h_PE` on `(0, A0]`.
pub fn pdf_h_pe(y: f64, geom: &ChannelGeometry) -> Result<f64> {
    let a0 = geom.a0();
    if !(y > 0.0 && y <= a0) {
        return Err(OislError::Domain { value: y, upper: a0 });
    }
    let g = geom.gamma();
    // γ · A0^{-γ} · y^{γ-1}
    Ok(g * (g * (y / a0).ln() - y.ln()).exp())
}

/// Distribution function `(y / A0)^γ`, clamped to `[0, 1]`.
pub fn cdf_h_pe(y: f64, geom: &ChannelGeometry) -> f64 {
    let a0 = geom.a0();
    if y <= 0.0 {
        0.0
    } else if y >= a0 {
        1.0
    } else {
        (geom.gamma() * (y / a0).ln()).exp()
    }
}

/// Density of `h_PE` for an arbitrary radial law `radial_pdf` by change of
/// variables through `r = g(y) = sqrt(-(w_z²/2) ln(y/A0))`.
///
/// Written as `f_R(g) · w_z² / (4 y g)`, which equals the raw Jacobian form and
/// turns the endpoint `y = A0` into the limit of `f_R(r)/r` as `r → 0`.
pub fn general_pdf_h_pe<F>(y: f64, geom: &ChannelGeometry, radial_pdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let a0 = geom.a0();
    if !(y > 0.0 && y <= a0) {
        return Err(OislError::Domain { value: y, upper: a0 });
    }
    let w2 = geom.w_z * geom.w_z;
    let g = (-0.5 * w2 * (y / a0).ln()).max(0.0).sqrt();
    let ratio = if g > 0.0 {
        radial_pdf(g) / g
    } else {
        let eps = 1e-8 * geom.w_z;
        radial_pdf(eps) / eps
    };
    Ok(ratio * w2 / (4.0 * y))
}

/// Mean channel state with states below `h_th` counted as zero.
///
/// Returns zero when `h_th ≥ A0`.
pub fn mean_h_pe(geom: &ChannelGeometry, h_th: f64) -> Result<f64> {
    let h_th = non_negative("h_th", h_th)?;
    let a0 = geom.a0();
    if h_th >= a0 {
        return Ok(0.0);
    }
    let w2 = geom.w_z * geom.w_z;
    let s2 = geom.sigma * geom.sigma;
    let g = geom.gamma();
    let tail = if h_th == 0.0 {
        0.0
    } else {
        ((g + 1.0) * (h_th / a0).ln()).exp()
    };
    Ok(w2 / (w2 + 4.0 * s2) * a0 * (1.0 - tail))
}

/// `P(r ≤ r_max) = 1 - exp(-r_max²/(2σ²))`.
pub fn capture_probability(geom: &ChannelGeometry, h_th: f64) -> Result<f64> {
    Ok(match r_max(geom, h_th)? {
        RadialLimit::Unbounded => 1.0,
        RadialLimit::Outage => 0.0,
        RadialLimit::Radius(r) => -(-r * r / (2.0 * geom.sigma * geom.sigma)).exp_m1(),
    })
}

/// Monte Carlo estimates of the thresholded mean and the capture probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMoments {
    pub mean: f64,
    pub capture_probability: f64,
    pub samples: usize,
}

/// Minimum sample count accepted by [`mc_channel_moments`].
pub const MIN_CHANNEL_SAMPLES: usize = 10_000;

/// Samples `r ~ Rayleigh(σ)`, zeroes far-field states below `h_th` and averages.
pub fn mc_channel_moments(seed: u64, geom: &ChannelGeometry, h_th: f64, n: usize) -> Result<ChannelMoments> {
    let h_th = non_negative("h_th", h_th)?;
    if n < MIN_CHANNEL_SAMPLES {
        return Err(OislError::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "channel Monte Carlo needs at least 10^4 samples",
        });
    }
    let (a0, w_z, sigma) = (geom.a0(), geom.w_z, geom.sigma);
    let [sum, captured] = montecarlo::chunked_sum(seed, n, |rng| {
        let h = far_field_state(montecarlo::radial(rng, sigma), a0, w_z);
        if h >= h_th {
            [h, 1.0]
        } else {
            [0.0, 0.0]
        }
    });
    Ok(ChannelMoments {
        mean: sum / n as f64,
        capture_probability: captured / n as f64,
        samples: n,
    })
}
