//! Oracle cross-checks run by the `validate` command.
//!
//! Every check compares a model route against an independent one (quadrature,
//! Monte Carlo, closed form or exhaustive scan) and reports the measured error
//! next to its tolerance. Monte Carlo checks use at most 10^6 samples.

use std::f64::consts::{LN_2, PI};

use oisl::beam::intensity;
use oisl::channel::{
    capture_probability, cdf_h_pe, general_pdf_h_pe, h_pe_approx, h_pe_exact, mc_channel_moments,
    mean_h_pe, pdf_h_pe, r_max,
};
use oisl::constellation::{
    arc_length, hop_distance, joint_plan, latency_profile, min_satellites, optimize_frequency,
};
use oisl::pointing::{rayleigh_pdf, sample_radial};
use oisl::quadrature::{integrate, integrate_with_breaks, QuadOptions};
use oisl::rate::{avg_rate_analytic, avg_rate_montecarlo, avg_rate_quadrature};
use oisl::special::{hyp2f1_1b, omega_quadrature, upsilon};
use oisl::{
    BeamParams, ChannelGeometry, ConstellationConfig, Hyp2F1Request, LinkModel, PointingModel,
    RadialLimit,
};

use crate::config::{RunConfig, SigmaModeArg};
use crate::error::CliError;

const MC_SAMPLES: usize = 1_000_000;

pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, measured: f64, tolerance: f64) -> Self {
        Self {
            name,
            measured,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: measured {:.3e} tolerance {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} of {} checks passed\n",
            self.checks.len() - self.failures(),
            self.checks.len()
        ));
        out
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Counts sign changes of the discrete differences of `v`.
pub fn sign_changes(v: &[f64]) -> usize {
    let signs: Vec<bool> = v
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| w[1] > w[0])
        .collect();
    signs.windows(2).filter(|s| s[0] != s[1]).count()
}

/// `b ∫_0^1 t^(b-1) / (1 + x t) dt` integrated in `s = b ln t`, decade by decade.
fn hyp2f1_oracle(b: f64, x: f64) -> Result<f64, CliError> {
    let s_min = (1e-25 / (1.0 + x)).ln();
    let step = 10f64.ln();
    let mut pts = vec![s_min];
    let mut s = s_min + step;
    while s < 0.0 {
        pts.push(s);
        s += step;
    }
    pts.push(0.0);
    let r = integrate_with_breaks(
        |s: f64| s.exp() / (1.0 + x * (s / b).exp()),
        &pts,
        QuadOptions::new(0.0, 1e-14),
    )?;
    Ok(r.value)
}

/// Runs every check. `perturb` scales A0 by `1 + perturb` on the analytic side
/// of the oracle comparisons, which must make the harness report failures.
pub fn run(cfg: &RunConfig, perturb: f64) -> Result<Report, CliError> {
    cfg.check()?;
    let mut checks = Vec::new();
    let seed = cfg.seed;
    let wd_scale = (1.0 + perturb).sqrt();
    let beam = BeamParams::new(cfg.w0, cfg.f_thz * 1e12)?;
    let budget = cfg.budget()?;
    let snr = budget.snr()?;
    let sigma0 = cfg.sigma_s0;
    let z = 1000e3;

    // Beam and pointing.
    let norm = {
        let w = oisl::beam::beam_waist(z, &beam, oisl::WaistMode::FarField)?;
        let r = integrate(
            |r| 2.0 * PI * r * intensity(r, z, &beam).unwrap_or(f64::NAN),
            0.0,
            10.0 * w,
            QuadOptions::new(0.0, 1e-13),
        )?;
        (r.value - 1.0).abs()
    };
    checks.push(Check::new("intensity integrates to one", norm, 1e-9));

    let samples = sample_radial(seed, sigma0, MC_SAMPLES)?;
    let n = samples.len() as f64;
    let m1 = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|r| r * r).sum::<f64>() / n;
    checks.push(Check::new(
        "rayleigh sample mean",
        rel(m1, sigma0 * (PI / 2.0).sqrt()),
        1e-2,
    ));
    checks.push(Check::new(
        "rayleigh sample second moment",
        rel(m2, 2.0 * sigma0 * sigma0),
        1e-2,
    ));

    // Channel state.
    let ratio_geom = ChannelGeometry::new(1e6, 100.0 * cfg.w_d, cfg.w_d, 1.0)?;
    checks.push(Check::new(
        "exact state on axis vs far-field peak",
        rel(h_pe_exact(0.0, &ratio_geom)?, ratio_geom.a0()),
        1e-4,
    ));
    let mut worst = 0.0f64;
    for k in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let r = k * ratio_geom.w_z;
        let d = (h_pe_exact(r, &ratio_geom)? - h_pe_approx(r, &ratio_geom)?).abs() / ratio_geom.a0();
        worst = worst.max(d);
    }
    checks.push(Check::new("far-field approximation error over A0", worst, 1e-2));

    let geom = ChannelGeometry::at_range(z, &beam, cfg.w_d, sigma0)?;
    let round_trip = match r_max(&geom, cfg.h_th)? {
        RadialLimit::Radius(r) => rel(h_pe_approx(r, &geom)?, cfg.h_th),
        _ => f64::INFINITY,
    };
    checks.push(Check::new("r_max round trip", round_trip, 1e-12));

    let a0 = geom.a0();
    let bins = 20;
    let mut counts = vec![0usize; bins];
    for &r in &samples {
        let h = h_pe_approx(r, &geom)?;
        let idx = ((h / a0) * bins as f64) as usize;
        counts[idx.min(bins - 1)] += 1;
    }
    let mut l1 = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        let lo = a0 * i as f64 / bins as f64;
        let hi = a0 * (i + 1) as f64 / bins as f64;
        l1 += (c as f64 / n - (cdf_h_pe(hi, &geom) - cdf_h_pe(lo, &geom))).abs();
    }
    checks.push(Check::new("sampled state histogram vs pdf (L1)", l1, 1e-2));

    let mut fd_err = 0.0f64;
    let mut general_err = 0.0f64;
    for i in 0..50 {
        let y = a0 * 10f64.powf(-6.0 + 5.9 * i as f64 / 49.0);
        let h = 1e-6 * y;
        let fd = (cdf_h_pe(y + h, &geom) - cdf_h_pe(y - h, &geom)) / (2.0 * h);
        let pdf = pdf_h_pe(y, &geom)?;
        fd_err = fd_err.max(rel(fd, pdf));
        let general = general_pdf_h_pe(y, &geom, |r| rayleigh_pdf(r, sigma0).unwrap_or(f64::NAN))?;
        general_err = general_err.max(rel(general, pdf));
    }
    checks.push(Check::new("cdf finite difference vs pdf", fd_err, 1e-6));
    checks.push(Check::new("general pdf with rayleigh law vs pdf", general_err, 1e-10));

    let mut pts = vec![0.0];
    for k in (1..=12).rev() {
        pts.push(a0 * 10f64.powi(-k));
    }
    pts.push(a0);
    let total = integrate_with_breaks(
        |y| general_pdf_h_pe(y, &geom, |r| rayleigh_pdf(r, sigma0).unwrap_or(f64::NAN)).unwrap_or(f64::NAN),
        &pts,
        QuadOptions::new(0.0, 1e-12),
    )?;
    checks.push(Check::new("general pdf normalisation", (total.value - 1.0).abs(), 1e-8));

    let analytic_geom = ChannelGeometry::at_range(z, &beam, cfg.w_d * wd_scale, sigma0)?;
    let mc = mc_channel_moments(seed, &geom, cfg.h_th, MC_SAMPLES)?;
    checks.push(Check::new(
        "mean state vs Monte Carlo",
        rel(mean_h_pe(&analytic_geom, cfg.h_th)?, mc.mean),
        5e-3,
    ));
    checks.push(Check::new(
        "capture probability vs Monte Carlo",
        rel(capture_probability(&analytic_geom, cfg.h_th)?, mc.capture_probability),
        3e-3,
    ));
    let w2 = geom.w_z * geom.w_z;
    checks.push(Check::new(
        "mean state at zero threshold vs closed form",
        rel(
            mean_h_pe(&geom, 0.0)?,
            2.0 * cfg.w_d * cfg.w_d / (w2 + 4.0 * sigma0 * sigma0),
        ),
        1e-12,
    ));

    // Special functions.
    let req = Hyp2F1Request {
        target_rel_err: 1e-14,
        ..Hyp2F1Request::new(1.5, 2.25e8)
    };
    checks.push(Check::new(
        "2F1 at b=1.5 x=2.25e8 vs integral",
        rel(hyp2f1_1b(&req)?, hyp2f1_oracle(1.5, 2.25e8)?),
        1e-10,
    ));
    let mut grid_err = 0.0f64;
    for b in [1.05, 1.5, 2.0, 4.0] {
        for x in [1e-3, 1.0, 1e3, 1e8, 1e11] {
            let req = Hyp2F1Request {
                target_rel_err: 1e-14,
                ..Hyp2F1Request::new(b, x)
            };
            grid_err = grid_err.max(rel(hyp2f1_1b(&req)?, hyp2f1_oracle(b, x)?));
        }
    }
    checks.push(Check::new("2F1 grid vs integral", grid_err, 1e-10));

    let mut ups_err = 0.0f64;
    for x in [1e-6, 3e-5, 1e-3] {
        for g in [0.05, 0.5, 3.0] {
            for s in [1e6, 1e9, 1e12] {
                let closed = upsilon(x, g, s)?;
                let quad = g * omega_quadrature(0.0, x, g, s)?;
                ups_err = ups_err.max(rel(closed, quad));
            }
        }
    }
    checks.push(Check::new("upsilon vs quadrature grid", ups_err, 1e-8));
    let two_ln2_m1 = 2.0 * LN_2 - 1.0;
    checks.push(Check::new(
        "upsilon at unit arguments",
        rel(upsilon(1.0, 1.0, 1.0)?, two_ln2_m1),
        1e-12,
    ));
    checks.push(Check::new(
        "omega at unit arguments",
        rel(omega_quadrature(0.0, 1.0, 1.0, 1.0)?, two_ln2_m1),
        1e-10,
    ));

    // Rate.
    checks.push(Check::new("snr from link budget", rel(snr, 2.25e11), 1e-12));
    let mut rate_err = 0.0f64;
    let modes = [
        PointingModel::constant(2.0)?,
        PointingModel::constant(4.0)?,
        cfg.pointing(SigmaModeArg::Exponential)?,
    ];
    let base = cfg.link_model(SigmaModeArg::Exponential)?;
    for pointing in modes {
        for f in [100e12, 200e12, 400e12] {
            let model = LinkModel {
                pointing,
                ..base.with_frequency(f)?
            };
            let perturbed = LinkModel {
                w_d: model.w_d * wd_scale,
                ..model
            };
            for delta in [500e3, 1000e3, 2000e3] {
                let a = avg_rate_analytic(delta, &perturbed)?.rate;
                let q = avg_rate_quadrature(delta, &model)?.rate;
                rate_err = rate_err.max(rel(a, q));
            }
        }
    }
    checks.push(Check::new("rate closed form vs quadrature", rate_err, 1e-6));

    let perturbed_base = LinkModel {
        w_d: base.w_d * wd_scale,
        ..base
    };
    let mc_rate = avg_rate_montecarlo(seed, MC_SAMPLES, z, &base)?;
    checks.push(Check::new(
        "rate closed form vs Monte Carlo",
        rel(avg_rate_analytic(z, &perturbed_base)?.rate, mc_rate.rate),
        5e-3,
    ));

    let mut jensen = f64::NEG_INFINITY;
    for sigma in [1.0, 2.0, 4.0] {
        for delta in [500e3, 1000e3, 2000e3] {
            let model = LinkModel {
                pointing: PointingModel::constant(sigma)?,
                ..base
            };
            let g = ChannelGeometry::at_range(delta, &model.beam, model.w_d, sigma)?;
            let bound = budget.bandwidth * (snr * mean_h_pe(&g, model.h_th)?).ln_1p() / LN_2;
            let rate = avg_rate_analytic(delta, &model)?.rate;
            jensen = jensen.max((rate - bound) / bound);
        }
    }
    checks.push(Check::new("rate below Jensen bound (excess)", jensen.max(0.0), 0.0));

    // Frequency trends.
    let mut fig3_violations = 0;
    let mut means = Vec::new();
    for f in cfg.frequencies() {
        let b = BeamParams::new(cfg.w0, f)?;
        means.push(mean_h_pe(&ChannelGeometry::at_range(z, &b, cfg.w_d, 2.0)?, cfg.h_th)?);
    }
    fig3_violations += means.windows(2).filter(|w| w[1] <= w[0]).count();
    checks.push(Check::new(
        "mean state increasing in frequency (violations)",
        fig3_violations as f64,
        0.0,
    ));

    let rates: Vec<f64> = cfg
        .frequencies()
        .into_iter()
        .map(|f| Ok(avg_rate_analytic(z, &base.with_frequency(f)?)?.rate))
        .collect::<Result<_, CliError>>()?;
    let changes = sign_changes(&rates);
    checks.push(Check::new(
        "rate unimodal in frequency at 1000 km (sign changes - 1)",
        (changes as f64 - 1.0).abs(),
        0.0,
    ));

    // Constellation.
    let constellation = ConstellationConfig {
        n_max: 40,
        ..cfg.constellation()?
    };
    let (chord, radius) = (constellation.chord, constellation.orbit_radius);
    let mut short = 0;
    for k in 1..=10_000 {
        if k as f64 * hop_distance(k, chord, radius)? < chord {
            short += 1;
        }
    }
    checks.push(Check::new("hop polyline shorter than chord (count)", short as f64, 0.0));
    checks.push(Check::new(
        "hop polyline vs arc length at N=10^4",
        rel(1e4 * hop_distance(10_000, chord, radius)?, arc_length(chord, radius)),
        1e-6,
    ));

    let fixed = latency_profile(&constellation, &base, false)?;
    let optimized = latency_profile(&constellation, &base, true)?;
    let worse = fixed
        .iter()
        .zip(&optimized)
        .filter(|(f, o)| o.total_latency > f.total_latency)
        .count();
    checks.push(Check::new("optimised latency above fixed (count)", worse as f64, 0.0));
    let interior = |p: &[oisl::ConstellationPlan]| {
        let (idx, _) = p
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_latency.total_cmp(&b.1.total_latency))
            .expect("non-empty profile");
        idx > 0 && idx + 1 < p.len()
    };
    checks.push(Check::new(
        "latency has an interior minimum in N (missing)",
        if interior(&fixed) || interior(&optimized) { 0.0 } else { 1.0 },
        0.0,
    ));

    let first = fixed.iter().find(|p| p.feasible).map(|p| p.n);
    let min = min_satellites(&constellation, &base)?;
    checks.push(Check::new(
        "min_satellites is first feasible of scan (mismatch)",
        if Some(min.n) == first || (first.is_none() && !min.feasible) { 0.0 } else { 1.0 },
        0.0,
    ));

    let mut increases = 0;
    let mut prev = usize::MAX;
    for t in [0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0] {
        let c = ConstellationConfig {
            latency_budget: t,
            ..constellation
        };
        let p = min_satellites(&c, &base)?;
        let n = if p.feasible { p.n } else { usize::MAX };
        if n > prev {
            increases += 1;
        }
        prev = n;
    }
    checks.push(Check::new("relaxed budget increases N (count)", increases as f64, 0.0));

    let coarse = optimize_frequency(2, &constellation, &base, constellation.f_range, 71)?;
    let fine = optimize_frequency(2, &constellation, &base, constellation.f_range, 141)?;
    checks.push(Check::new(
        "optimal frequency shift under grid doubling (THz)",
        (coarse.f_star - fine.f_star).abs() / 1e12,
        0.1,
    ));

    let mut joint_worse = 0;
    for t in [1.0, 2.0, 3.0, 5.0] {
        let c = ConstellationConfig {
            latency_budget: t,
            ..constellation
        };
        let fixed_plan = min_satellites(&c, &base)?;
        let joint = joint_plan(&c, &base)?;
        if fixed_plan.feasible && joint.feasible && joint.n > fixed_plan.n {
            joint_worse += 1;
        }
    }
    checks.push(Check::new("joint plan N above fixed plan N (count)", joint_worse as f64, 0.0));

    Ok(Report { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_change_counting() {
        assert_eq!(sign_changes(&[1.0, 2.0, 3.0]), 0);
        assert_eq!(sign_changes(&[1.0, 2.0, 2.0, 1.0]), 1);
        assert_eq!(sign_changes(&[1.0, 2.0, 1.0, 2.0]), 2);
    }

    #[test]
    fn oracle_reproduces_b_one() {
        for x in [1e-3, 1.0, 1e5] {
            let v = hyp2f1_oracle(1.0, x).unwrap();
            assert!(rel(v, x.ln_1p() / x) < 1e-12);
        }
    }
}
