//! Cooperative relaying along a circular orbit.
//!
//! Source and destination sit on an orbit of radius `L_S` separated by the chord
//! `L`. `N` equally spaced hops divide the arc, so every hop has the same length
//! `δ(N)` and the same average rate; the transmission latency is `N · D / R(δ)`.
//! `N` counts hops, so `N = 1` is the direct link and there are `N - 1` relays.

use rayon::prelude::*;

use crate::beam::SPEED_OF_LIGHT;
use crate::error::{positive, OislError, Result};
use crate::rate::{avg_rate_analytic, LinkModel};

/// Closed frequency interval in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyRange {
    pub min: f64,
    pub max: f64,
}

impl FrequencyRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        positive("f_min", min)?;
        positive("f_max", max)?;
        if max < min {
            return Err(OislError::InvalidParameter {
                name: "f_max",
                value: max,
                reason: "must not be below f_min",
            });
        }
        Ok(Self { min, max })
    }

    /// `points` evenly spaced frequencies including both ends.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        if points <= 1 || self.max == self.min {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (points - 1) as f64;
        (0..points)
            .map(|i| if i + 1 == points { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}

impl Default for FrequencyRange {
    fn default() -> Self {
        Self { min: 50e12, max: 400e12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstellationConfig {
    /// Chord between source and destination, m.
    pub chord: f64,
    /// Orbit radius from the Earth centre, m.
    pub orbit_radius: f64,
    /// Payload, bit.
    pub data_bits: f64,
    /// Latency budget, s.
    pub latency_budget: f64,
    pub n_max: usize,
    pub f_range: FrequencyRange,
    /// Grid points for frequency search.
    pub f_grid: usize,
    /// Add `δ/c` per hop to the transmission time.
    pub include_propagation_delay: bool,
}

impl ConstellationConfig {
    pub fn validate(&self) -> Result<()> {
        positive("chord", self.chord)?;
        positive("orbit_radius", self.orbit_radius)?;
        positive("data_bits", self.data_bits)?;
        positive("latency_budget", self.latency_budget)?;
        if self.chord > 2.0 * self.orbit_radius {
            return Err(chord_error(self.chord, self.orbit_radius));
        }
        if self.n_max == 0 {
            return Err(OislError::InvalidParameter {
                name: "n_max",
                value: 0.0,
                reason: "must be at least one",
            });
        }
        if self.f_grid < 2 {
            return Err(OislError::InvalidParameter {
                name: "f_grid",
                value: self.f_grid as f64,
                reason: "frequency grid needs at least two points",
            });
        }
        FrequencyRange::new(self.f_range.min, self.f_range.max)?;
        Ok(())
    }
}

impl Default for ConstellationConfig {
    fn default() -> Self {
        Self {
            chord: 3000e3,
            orbit_radius: 6900e3,
            data_bits: 100e9,
            latency_budget: 2.0,
            n_max: 64,
            f_range: FrequencyRange::default(),
            f_grid: 71,
            include_propagation_delay: false,
        }
    }
}

/// Outcome of a relay-count search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstellationPlan {
    /// Hop count.
    pub n: usize,
    /// Hop length, m.
    pub delta: f64,
    /// bit/s.
    pub per_hop_rate: f64,
    /// s; infinite when the hop is in outage.
    pub total_latency: f64,
    /// Hz.
    pub f_used: f64,
    pub feasible: bool,
}

fn chord_error(chord: f64, orbit_radius: f64) -> OislError {
    OislError::InvalidGeometry(format!(
        "chord {chord} m exceeds the orbit diameter {} m",
        2.0 * orbit_radius
    ))
}

/// Hop length `2 L_S sin(arcsin(L / 2L_S) / N)`.
pub fn hop_distance(n: usize, chord: f64, orbit_radius: f64) -> Result<f64> {
    if n == 0 {
        return Err(OislError::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "need at least one hop",
        });
    }
    let chord = positive("chord", chord)?;
    let orbit_radius = positive("orbit_radius", orbit_radius)?;
    if chord > 2.0 * orbit_radius {
        return Err(chord_error(chord, orbit_radius));
    }
    if n == 1 {
        return Ok(chord);
    }
    let half_angle = (chord / (2.0 * orbit_radius)).asin();
    Ok(2.0 * orbit_radius * (half_angle / n as f64).sin())
}

/// Arc length `2 L_S arcsin(L / 2L_S)` between source and destination.
pub fn arc_length(chord: f64, orbit_radius: f64) -> f64 {
    2.0 * orbit_radius * (chord / (2.0 * orbit_radius)).asin()
}

fn latency_at(n: usize, delta: f64, rate: f64, config: &ConstellationConfig) -> f64 {
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    let transmit = n as f64 * config.data_bits / rate;
    if config.include_propagation_delay {
        transmit + n as f64 * delta / SPEED_OF_LIGHT
    } else {
        transmit
    }
}

/// Hop length, per-hop rate and total latency for `n` hops at the model's frequency.
pub fn hop_profile(n: usize, config: &ConstellationConfig, model: &LinkModel) -> Result<ConstellationPlan> {
    let delta = hop_distance(n, config.chord, config.orbit_radius)?;
    let r = avg_rate_analytic(delta, model)?;
    let rate = if r.outage { 0.0 } else { r.rate };
    let total_latency = latency_at(n, delta, rate, config);
    Ok(ConstellationPlan {
        n,
        delta,
        per_hop_rate: rate,
        total_latency,
        f_used: model.beam.frequency(),
        feasible: total_latency <= config.latency_budget,
    })
}

/// `Σ_n D / R_n` over `n` equal hops; infinite if the hop is in outage.
pub fn total_latency(n: usize, config: &ConstellationConfig, model: &LinkModel) -> Result<f64> {
    Ok(hop_profile(n, config, model)?.total_latency)
}

/// Smallest hop count in `[1, n_max]` meeting the latency budget at the model's
/// frequency. If none does, the plan is marked infeasible and carries the hop
/// count of minimum latency.
pub fn min_satellites(config: &ConstellationConfig, model: &LinkModel) -> Result<ConstellationPlan> {
    config.validate()?;
    let profile: Vec<ConstellationPlan> = (1..=config.n_max)
        .into_par_iter()
        .map(|n| hop_profile(n, config, model))
        .collect::<Result<_>>()?;
    Ok(first_feasible_or_best(&profile))
}

fn first_feasible_or_best(profile: &[ConstellationPlan]) -> ConstellationPlan {
    if let Some(p) = profile.iter().find(|p| p.feasible) {
        return *p;
    }
    *profile
        .iter()
        .min_by(|a, b| a.total_latency.total_cmp(&b.total_latency))
        .expect("profile covers at least one hop count")
}

/// Best frequency found for a fixed hop count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyChoice {
    /// Hz.
    pub f_star: f64,
    /// s; infinite when every grid frequency is in outage.
    pub latency: f64,
    pub per_hop_rate: f64,
    pub feasible: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Exhaustive search over `grid` evenly spaced frequencies, followed by a
/// golden-section refinement on the bracketing interval when the grid minimum
/// is interior.
pub fn optimize_frequency(
    n: usize,
    config: &ConstellationConfig,
    model: &LinkModel,
    range: FrequencyRange,
    grid: usize,
) -> Result<FrequencyChoice> {
    if grid < 2 {
        return Err(OislError::InvalidParameter {
            name: "grid",
            value: grid as f64,
            reason: "frequency grid needs at least two points",
        });
    }
    let range = FrequencyRange::new(range.min, range.max)?;
    let delta = hop_distance(n, config.chord, config.orbit_radius)?;
    let eval = |f: f64| -> Result<(f64, f64)> {
        let r = avg_rate_analytic(delta, &model.with_frequency(f)?)?;
        let rate = if r.outage { 0.0 } else { r.rate };
        Ok((latency_at(n, delta, rate, config), rate))
    };

    let freqs = range.grid(grid);
    let values: Vec<(f64, f64)> = freqs.iter().map(|&f| eval(f)).collect::<Result<_>>()?;
    let (best_idx, &(mut best_latency, mut best_rate)) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("grid is non-empty");
    let mut best_f = freqs[best_idx];

    if best_latency.is_finite() && best_idx > 0 && best_idx + 1 < freqs.len() {
        let (mut a, mut b) = (freqs[best_idx - 1], freqs[best_idx + 1]);
        let tol = 1e-7 * best_f;
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let (mut fc, mut fd) = (eval(c)?, eval(d)?);
        while b - a > tol {
            if fc.0 < fd.0 {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = eval(d)?;
            }
        }
        for (f, v) in [(c, fc), (d, fd)] {
            if v.0 < best_latency {
                best_latency = v.0;
                best_rate = v.1;
                best_f = f;
            }
        }
    }

    Ok(FrequencyChoice {
        f_star: best_f,
        latency: best_latency,
        per_hop_rate: best_rate,
        feasible: best_latency.is_finite(),
    })
}

/// Plan for `n` hops at the frequency chosen by [`optimize_frequency`].
pub fn optimized_profile(n: usize, config: &ConstellationConfig, model: &LinkModel) -> Result<ConstellationPlan> {
    let choice = optimize_frequency(n, config, model, config.f_range, config.f_grid)?;
    Ok(ConstellationPlan {
        n,
        delta: hop_distance(n, config.chord, config.orbit_radius)?,
        per_hop_rate: choice.per_hop_rate,
        total_latency: choice.latency,
        f_used: choice.f_star,
        feasible: choice.latency <= config.latency_budget,
    })
}

/// Smallest hop count whose frequency-optimised latency meets the budget.
///
/// Scans `N = 1, 2, …, n_max` in order and stops at the first feasible count;
/// otherwise returns the minimum-latency plan marked infeasible.
pub fn joint_plan(config: &ConstellationConfig, model: &LinkModel) -> Result<ConstellationPlan> {
    config.validate()?;
    let mut profile = Vec::with_capacity(config.n_max);
    for n in 1..=config.n_max {
        let plan = optimized_profile(n, config, model)?;
        if plan.feasible {
            return Ok(plan);
        }
        profile.push(plan);
    }
    Ok(first_feasible_or_best(&profile))
}

/// Latency profile over `N = 1..=n_max`, at the model's frequency or optimised
/// per hop count. Rows are in `N` order.
pub fn latency_profile(config: &ConstellationConfig, model: &LinkModel, optimize: bool) -> Result<Vec<ConstellationPlan>> {
    config.validate()?;
    (1..=config.n_max)
        .into_par_iter()
        .map(|n| {
            if optimize {
                optimized_profile(n, config, model)
            } else {
                hop_profile(n, config, model)
            }
        })
        .collect()
}
