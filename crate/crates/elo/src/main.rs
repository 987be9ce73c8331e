//! `elo` — sweep and validation driver for the compression/communication
//! energy–latency models.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use elo::config::{parse_config, OutputFormat, RunConfig, Scenario};
use elo::output;

#[derive(Parser)]
#[command(
    name = "elo",
    about = "Energy-latency trade-off sweeps for a compressing wireless sensor",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep energy budgets and emit the latency-quantile Pareto front.
    PowerFront {
        /// Flat key = value config file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Reliability quantile(s), one output file each.
        #[arg(long = "rho")]
        rho: Vec<f64>,
        /// Energy budget list in J (comma-separated).
        #[arg(long = "emax", value_delimiter = ',')]
        emax: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Sweep slot budgets and emit the energy/QAoI Pareto front.
    TimeFront {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "rho")]
        rho: Vec<f64>,
        /// Slot budget list in s (comma-separated).
        #[arg(long = "t", value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Run the full oracle suite and write a pass/fail report.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the Monte Carlo sample count.
        #[arg(long)]
        samples: Option<u64>,
        /// Override the RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, String> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read config {}: {e}", p.display()))?,
        None => String::new(),
    };
    parse_config(&text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, String> {
    let mut cfg;
    match &cli.cmd {
        Cmd::PowerFront { config, rho, emax, out, format } => {
            cfg = load_config(config)?;
            cfg.scenario = Scenario::Power;
            if !rho.is_empty() {
                cfg.rho_list = rho.clone();
            }
            if !emax.is_empty() {
                cfg.e_max_list = emax.clone();
            }
            if let Some(dir) = out {
                cfg.output_dir = dir.clone();
            }
            if let Some(f) = format {
                cfg.format = *f;
            }
        }
        Cmd::TimeFront { config, rho, t, out, format } => {
            cfg = load_config(config)?;
            cfg.scenario = Scenario::Time;
            if !rho.is_empty() {
                cfg.rho_list = rho.clone();
            }
            if !t.is_empty() {
                cfg.t_list = t.clone();
            }
            if let Some(dir) = out {
                cfg.output_dir = dir.clone();
            }
            if let Some(f) = format {
                cfg.format = *f;
            }
        }
        Cmd::Validate { config, samples, seed, out } => {
            cfg = load_config(config)?;
            cfg.scenario = Scenario::Validate;
            if let Some(n) = samples {
                cfg.sim.n_samples = *n;
            }
            if let Some(s) = seed {
                cfg.sim.seed = *s;
            }
            if let Some(dir) = out {
                cfg.output_dir = dir.clone();
            }
        }
    }
    // ELO_SEED wins over both the config file and --seed
    if let Ok(env_seed) = std::env::var("ELO_SEED") {
        cfg.sim.seed = env_seed
            .parse()
            .map_err(|_| format!("ELO_SEED must be an integer, got `{env_seed}`"))?;
    }
    let outcome = output::run(&cfg).map_err(|e| e.to_string())?;
    print!("{}", outcome.summary);
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(match outcome.validation_passed {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}
