//! `oisl`: frequency sweeps, relay planning and self-validation for the
//! optical inter-satellite link model.

mod commands;
mod config;
mod error;
mod output;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, SigmaModeArg};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "oisl", version, about = "Optical inter-satellite link channel and rate analysis")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON file with run parameters; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo sample count; adds Monte Carlo columns.
    #[arg(long, global = true)]
    mc: Option<usize>,
    #[arg(long, value_enum, global = true)]
    sigma_mode: Option<SigmaModeArg>,
    /// Add the per-hop light travel time to the latency.
    #[arg(long, global = true)]
    include_propagation_delay: bool,
    /// Lower sweep frequency, THz.
    #[arg(long, global = true)]
    f_min: Option<f64>,
    /// Upper sweep frequency, THz.
    #[arg(long, global = true)]
    f_max: Option<f64>,
    #[arg(long, global = true)]
    f_points: Option<usize>,
    /// Largest hop count considered by the planner.
    #[arg(long = "N-max", global = true)]
    n_max: Option<usize>,
    /// Link distance in km; repeat for several distances.
    #[arg(long = "distance-km", global = true)]
    distances_km: Vec<f64>,
    /// Jitter scale at zero distance, m.
    #[arg(long, global = true)]
    sigma_s0: Option<f64>,
    /// Dimensionless detection threshold.
    #[arg(long, global = true)]
    h_th: Option<f64>,
    /// Latency budget, s.
    #[arg(long, global = true)]
    t_th: Option<f64>,
    /// Chord between the end points of the relay chain, km.
    #[arg(long, global = true)]
    l_km: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean channel state and capture probability against frequency.
    Channel,
    /// Average hop rate against frequency.
    Rate,
    /// Latency against hop count, fixed and optimised frequency.
    Plan,
    /// Run the oracle cross-checks and report pass/fail per check.
    Validate {
        /// Relative error injected into A0 on the analytic side.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
    },
}

impl GlobalArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.mc {
            cfg.mc = Some(v);
        }
        if let Some(v) = self.sigma_mode {
            cfg.sigma_mode = Some(v);
        }
        if self.include_propagation_delay {
            cfg.include_propagation_delay = true;
        }
        if let Some(v) = self.f_min {
            cfg.f_min_thz = v;
        }
        if let Some(v) = self.f_max {
            cfg.f_max_thz = v;
        }
        if let Some(v) = self.f_points {
            cfg.f_points = v;
        }
        if let Some(v) = self.n_max {
            cfg.n_max = v;
        }
        if !self.distances_km.is_empty() {
            cfg.distances_km = self.distances_km.clone();
        }
        if let Some(v) = self.sigma_s0 {
            cfg.sigma_s0 = v;
        }
        if let Some(v) = self.h_th {
            cfg.h_th = v;
        }
        if let Some(v) = self.t_th {
            cfg.t_th = v;
        }
        if let Some(v) = self.l_km {
            cfg.l_km = v;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = cli.global.resolve()?;
    let out = cfg.out.as_deref();
    match cli.command {
        Command::Channel => output::emit(out, &commands::channel(&cfg)?),
        Command::Rate => output::emit(out, &commands::rate(&cfg)?),
        Command::Plan => {
            let (csv, summary) = commands::plan(&cfg)?;
            output::emit(out, &csv)?;
            eprintln!("{summary}");
            Ok(())
        }
        Command::Validate { perturb } => {
            if !perturb.is_finite() || perturb <= -1.0 {
                return Err(CliError::Config(format!("perturb: {perturb} must exceed -1")));
            }
            let report = validate::run(&cfg, perturb)?;
            output::emit(out, report.render().as_bytes())?;
            match report.failures() {
                0 => Ok(()),
                failed => Err(CliError::Validation {
                    failed,
                    total: report.checks.len(),
                }),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oisl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
