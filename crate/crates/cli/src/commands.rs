//! The `channel`, `rate` and `plan` sweeps.

use oisl::channel::{capture_probability, mc_channel_moments, mean_h_pe};
use oisl::constellation::{joint_plan, latency_profile, min_satellites};
use oisl::rate::{avg_rate_analytic, avg_rate_montecarlo, avg_rate_quadrature};
use oisl::{BeamParams, ChannelGeometry, ConstellationPlan};

use crate::config::{RunConfig, SigmaModeArg};
use crate::error::CliError;
use crate::output::{sci, Table};

/// Mean channel state and capture probability over the frequency sweep, one
/// block of rows per distance.
pub fn channel(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    cfg.check()?;
    let pointing = cfg.pointing(SigmaModeArg::Constant)?;
    let mut header = vec!["f_THz", "z_km", "sigma_s_m", "mean_h_pe_analytic"];
    if cfg.mc.is_some() {
        header.push("mean_h_pe_mc");
    }
    header.push("capture_probability");
    if cfg.mc.is_some() {
        header.push("capture_probability_mc");
    }
    let mut table = Table::new(&header);

    for &z_km in &cfg.distances_km {
        let z = z_km * 1e3;
        let sigma = pointing.sigma_s(z)?;
        for f in cfg.frequencies() {
            let beam = BeamParams::new(cfg.w0, f)?;
            let geom = ChannelGeometry::at_range(z, &beam, cfg.w_d, sigma)?;
            let mean = mean_h_pe(&geom, cfg.h_th)?;
            let capture = capture_probability(&geom, cfg.h_th)?;
            let mut row = vec![sci(f / 1e12), sci(z_km), sci(sigma), sci(mean)];
            match cfg.mc {
                Some(n) => {
                    let mc = mc_channel_moments(cfg.seed, &geom, cfg.h_th, n)?;
                    row.push(sci(mc.mean));
                    row.push(sci(capture));
                    row.push(sci(mc.capture_probability));
                }
                None => row.push(sci(capture)),
            }
            table.row(row);
        }
    }
    Ok(table.into_bytes())
}

/// Average hop rate over the frequency sweep, one block of rows per distance.
pub fn rate(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    cfg.check()?;
    let base = cfg.link_model(SigmaModeArg::Exponential)?;
    let mut header = vec!["f_THz", "delta_km", "sigma_s_m", "rate_analytic_bps", "rate_quadrature_bps"];
    if cfg.mc.is_some() {
        header.push("rate_mc_bps");
    }
    header.push("outage");
    let mut table = Table::new(&header);

    for &d_km in &cfg.distances_km {
        let delta = d_km * 1e3;
        let sigma = base.pointing.sigma_s(delta)?;
        for f in cfg.frequencies() {
            let model = base.with_frequency(f)?;
            let analytic = avg_rate_analytic(delta, &model)?;
            let quad = avg_rate_quadrature(delta, &model)?;
            let mut row = vec![
                sci(f / 1e12),
                sci(d_km),
                sci(sigma),
                sci(analytic.rate),
                sci(quad.rate),
            ];
            if let Some(n) = cfg.mc {
                row.push(sci(avg_rate_montecarlo(cfg.seed, n, delta, &model)?.rate));
            }
            row.push(if analytic.outage { "1" } else { "0" }.to_string());
            table.row(row);
        }
    }
    Ok(table.into_bytes())
}

/// Latency against hop count at the configured frequency and with per-count
/// frequency optimisation. Returns the CSV and a one-line summary.
pub fn plan(cfg: &RunConfig) -> Result<(Vec<u8>, String), CliError> {
    cfg.check()?;
    let model = cfg.link_model(SigmaModeArg::Exponential)?;
    let constellation = cfg.constellation()?;
    let fixed = latency_profile(&constellation, &model, false)?;
    let optimized = latency_profile(&constellation, &model, true)?;

    let mut table = Table::new(&[
        "mode",
        "N",
        "delta_km",
        "f_THz",
        "rate_bps",
        "total_latency_s",
        "feasible",
    ]);
    for (mode, profile) in [("fixed", &fixed), ("optimized", &optimized)] {
        for p in profile {
            table.row([
                mode.to_string(),
                p.n.to_string(),
                sci(p.delta / 1e3),
                sci(p.f_used / 1e12),
                sci(p.per_hop_rate),
                sci(p.total_latency),
                if p.feasible { "1" } else { "0" }.to_string(),
            ]);
        }
    }

    let min = min_satellites(&constellation, &model)?;
    let joint = joint_plan(&constellation, &model)?;
    let summary = format!(
        "min_satellites: {}; joint plan: {}",
        describe(&min),
        describe(&joint)
    );
    Ok((table.into_bytes(), summary))
}

fn describe(p: &ConstellationPlan) -> String {
    format!(
        "N={} f={} THz latency={} s{}",
        p.n,
        sci(p.f_used / 1e12),
        sci(p.total_latency),
        if p.feasible { "" } else { " (budget not met)" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(bytes: &[u8]) -> Vec<Vec<String>> {
        String::from_utf8(bytes.to_vec())
            .unwrap()
            .lines()
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }

    fn column(table: &[Vec<String>], name: &str) -> Vec<f64> {
        let idx = table[0].iter().position(|h| h == name).unwrap();
        table[1..].iter().map(|r| r[idx].parse().unwrap()).collect()
    }

    #[test]
    fn channel_mean_rises_with_frequency() {
        let t = rows(&channel(&RunConfig::default()).unwrap());
        assert_eq!(t.len(), 72);
        let mean = column(&t, "mean_h_pe_analytic");
        assert!(mean.windows(2).all(|w| w[1] > w[0]));
        assert!(column(&t, "sigma_s_m").iter().all(|&s| s == 2.0));
    }

    #[test]
    fn channel_single_point_sweep() {
        let cfg = RunConfig {
            f_min_thz: 120.0,
            f_max_thz: 120.0,
            ..RunConfig::default()
        };
        assert_eq!(rows(&channel(&cfg).unwrap()).len(), 2);
    }

    #[test]
    fn rate_columns_agree_and_outage_is_flagged() {
        let cfg = RunConfig {
            f_points: 8,
            ..RunConfig::default()
        };
        let t = rows(&rate(&cfg).unwrap());
        let a = column(&t, "rate_analytic_bps");
        let q = column(&t, "rate_quadrature_bps");
        for (x, y) in a.iter().zip(&q) {
            assert!(((x - y) / y).abs() < 1e-6);
        }
        let outage = RunConfig {
            h_th: 1.0,
            f_points: 3,
            ..RunConfig::default()
        };
        let t = rows(&rate(&outage).unwrap());
        assert!(column(&t, "rate_analytic_bps").iter().all(|&r| r == 0.0));
        assert!(column(&t, "outage").iter().all(|&o| o == 1.0));
    }

    #[test]
    fn plan_with_loose_budget_uses_direct_link() {
        let cfg = RunConfig {
            t_th: 1e9,
            n_max: 8,
            ..RunConfig::default()
        };
        let (csv, summary) = plan(&cfg).unwrap();
        assert_eq!(rows(&csv).len(), 17);
        assert!(summary.starts_with("min_satellites: N=1 "), "{summary}");
    }
}
