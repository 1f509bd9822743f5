//! Run configuration: defaults, JSON file and command-line overrides.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use oisl::{
    BeamParams, ConstellationConfig, FrequencyRange, LinkBudget, LinkModel, PointingModel, SigmaMode,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SigmaModeArg {
    Constant,
    Exponential,
}

impl From<SigmaModeArg> for SigmaMode {
    fn from(m: SigmaModeArg) -> Self {
        match m {
            SigmaModeArg::Constant => SigmaMode::Constant,
            SigmaModeArg::Exponential => SigmaMode::Exponential,
        }
    }
}

/// All tunable inputs. Lengths are in metres unless the name says otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub w0: f64,
    pub w_d: f64,
    pub f_thz: f64,
    pub h_pl: f64,
    pub eta: f64,
    pub p_t: f64,
    pub bandwidth: f64,
    pub sigma_n2: f64,
    pub l_s_km: f64,
    pub data_bits: f64,
    pub h_th: f64,
    /// Unset means the command's own default: constant for `channel`,
    /// exponential for `rate` and `plan`.
    pub sigma_mode: Option<SigmaModeArg>,
    pub sigma_s0: f64,
    pub k0: f64,
    pub d0_km: f64,
    pub distances_km: Vec<f64>,
    pub l_km: f64,
    pub t_th: f64,
    pub n_max: usize,
    pub f_min_thz: f64,
    pub f_max_thz: f64,
    pub f_points: usize,
    pub seed: u64,
    pub mc: Option<usize>,
    pub include_propagation_delay: bool,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            w0: 0.1,
            w_d: 0.1,
            f_thz: 200.0,
            h_pl: 0.9,
            eta: 0.5,
            p_t: 0.5,
            bandwidth: 10e9,
            sigma_n2: 1e-12,
            l_s_km: 6900.0,
            data_bits: 100e9,
            h_th: 1e-6,
            sigma_mode: None,
            sigma_s0: 2.0,
            k0: 0.1,
            d0_km: 100.0,
            distances_km: vec![1000.0],
            l_km: 3000.0,
            t_th: 2.0,
            n_max: 64,
            f_min_thz: 50.0,
            f_max_thz: 400.0,
            f_points: 71,
            seed: 1,
            mc: None,
            include_propagation_delay: false,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Checks the fields the core types do not own.
    pub fn check(&self) -> Result<(), CliError> {
        let mut problems = Vec::new();
        if self.distances_km.is_empty() {
            problems.push("distances_km: at least one distance is required".to_string());
        }
        for d in &self.distances_km {
            if !(*d > 0.0 && d.is_finite()) {
                problems.push(format!("distances_km: {d} is not a positive distance"));
            }
        }
        if self.f_points == 0 {
            problems.push("f_points: must be at least one".to_string());
        }
        if !(self.f_min_thz > 0.0 && self.f_max_thz >= self.f_min_thz) {
            problems.push(format!(
                "f_min_thz/f_max_thz: need 0 < min <= max, got {} and {}",
                self.f_min_thz, self.f_max_thz
            ));
        }
        if !(self.h_th >= 0.0 && self.h_th.is_finite()) {
            problems.push(format!("h_th: {} is not a non-negative threshold", self.h_th));
        }
        if !(self.w_d > 0.0 && self.w_d.is_finite()) {
            problems.push(format!("w_d: {} is not a positive radius", self.w_d));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(problems.join("; ")))
        }
    }

    pub fn pointing(&self, default_mode: SigmaModeArg) -> Result<PointingModel, CliError> {
        let mode = self.sigma_mode.unwrap_or(default_mode).into();
        Ok(PointingModel::new(self.sigma_s0, self.k0, self.d0_km * 1e3, mode)?)
    }

    pub fn budget(&self) -> Result<LinkBudget, CliError> {
        let budget = LinkBudget {
            bandwidth: self.bandwidth,
            p_t: self.p_t,
            eta: self.eta,
            h_pl: self.h_pl,
            sigma_n2: self.sigma_n2,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn link_model(&self, default_mode: SigmaModeArg) -> Result<LinkModel, CliError> {
        Ok(LinkModel {
            beam: BeamParams::new(self.w0, self.f_thz * 1e12)?,
            pointing: self.pointing(default_mode)?,
            w_d: self.w_d,
            h_th: self.h_th,
            budget: self.budget()?,
        })
    }

    /// Sweep frequencies in Hz. A single point, or `min == max`, gives one row.
    pub fn frequencies(&self) -> Vec<f64> {
        if self.f_points == 1 || self.f_min_thz == self.f_max_thz {
            return vec![self.f_min_thz * 1e12];
        }
        let step = (self.f_max_thz - self.f_min_thz) / (self.f_points - 1) as f64;
        (0..self.f_points)
            .map(|i| {
                if i + 1 == self.f_points {
                    self.f_max_thz * 1e12
                } else {
                    (self.f_min_thz + step * i as f64) * 1e12
                }
            })
            .collect()
    }

    pub fn constellation(&self) -> Result<ConstellationConfig, CliError> {
        let cfg = ConstellationConfig {
            chord: self.l_km * 1e3,
            orbit_radius: self.l_s_km * 1e3,
            data_bits: self.data_bits,
            latency_budget: self.t_th,
            n_max: self.n_max,
            f_range: FrequencyRange::new(self.f_min_thz * 1e12, self.f_max_thz * 1e12)?,
            f_grid: self.f_points,
            include_propagation_delay: self.include_propagation_delay,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"p_t": 1.0, "sigma_mode": "constant"}"#).unwrap();
        assert_eq!(cfg.p_t, 1.0);
        assert_eq!(cfg.sigma_mode, Some(SigmaModeArg::Constant));
        assert_eq!(cfg.w0, 0.1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"pt": 1.0}"#).is_err());
    }

    #[test]
    fn frequency_grid_endpoints() {
        let cfg = RunConfig::default();
        let f = cfg.frequencies();
        assert_eq!(f.len(), 71);
        assert_eq!(f[0], 50e12);
        assert_eq!(f[70], 400e12);
        assert!((f[1] - 55e12).abs() < 1.0);
        let single = RunConfig {
            f_max_thz: 50.0,
            ..RunConfig::default()
        };
        assert_eq!(single.frequencies(), vec![50e12]);
    }

    #[test]
    fn check_reports_every_problem() {
        let cfg = RunConfig {
            distances_km: vec![-1.0],
            f_points: 0,
            ..RunConfig::default()
        };
        match cfg.check() {
            Err(CliError::Config(msg)) => {
                assert!(msg.contains("distances_km"));
                assert!(msg.contains("f_points"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
