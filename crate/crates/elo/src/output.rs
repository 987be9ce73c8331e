//! Run orchestration and deterministic file export.
//!
//! Every output file opens with a `# key = value` block echoing the full
//! configuration (defaults included) plus the dB/dBm equivalents of the
//! converted keys and a run id, so any file can be reproduced from its own
//! header. Numbers are written with 17 significant digits.

use std::fmt;
use std::fs;
use std::io;
use std::path::PathBuf;

use crate::comm_model;
use crate::config::{linear_to_db, watt_to_dbm, OutputFormat, RunConfig, Scenario};
use crate::power_scenario;
use crate::time_scenario;
use crate::validate;

#[derive(Debug)]
pub enum RunError {
    Io(io::Error),
    Setup(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Io(e) => write!(f, "io error: {e}"),
            RunError::Setup(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e)
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// Set by the validate scenario; `Some(false)` means a criterion failed.
    pub validation_passed: Option<bool>,
    /// Human-readable summary printed by the CLI.
    pub summary: String,
}

/// An ordered sweep result: one row per constraint value (energy budget or
/// slot budget), sorted ascending with duplicates collapsed. Infeasible
/// rows stay in the table rather than being dropped.
#[derive(Debug, Clone)]
pub struct ParetoFront<T> {
    pub scenario: Scenario,
    pub rho: f64,
    pub rows: Vec<(f64, T)>,
}

impl<T> ParetoFront<T> {
    pub fn new(scenario: Scenario, rho: f64, mut rows: Vec<(f64, T)>) -> Self {
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        rows.dedup_by(|a, b| a.0 == b.0);
        ParetoFront { scenario, rho, rows }
    }
}

fn fmt_g(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Self-describing header shared by every output file.
fn header(cfg: &RunConfig) -> String {
    let mut s = String::new();
    s.push_str(&format!("# run_id = {}\n", cfg.run_id()));
    for line in cfg.emit().lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    // converted-unit equivalents, for auditing against dB-style tables
    let ch = &cfg.params.chan;
    s.push_str(&format!("# n0_dbm_per_hz_equiv = {}\n", watt_to_dbm(ch.n0)));
    s.push_str(&format!("# k0_db_equiv = {}\n", linear_to_db(ch.k0)));
    s.push_str(&format!("# p_tx_dbm_equiv = {}\n", watt_to_dbm(ch.p_tx)));
    // derived channel constants
    s.push_str(&format!("# derived_avg_snr = {}\n", comm_model::avg_snr(ch)));
    s.push_str(&format!("# derived_rate_bit_per_s = {}\n", comm_model::outage_rate(ch)));
    s.push_str(&format!("# derived_packet_time_s = {}\n", comm_model::packet_time(ch)));
    s.push_str(&format!("# derived_energy_eff_bit_per_j = {}\n", comm_model::energy_efficiency(ch)));
    s
}

fn rho_file_name(prefix: &str, rho: f64, format: OutputFormat) -> String {
    format!("{prefix}_rho{rho}.{format}")
}

fn write_file(cfg: &RunConfig, name: &str, body: &str) -> Result<PathBuf, RunError> {
    fs::create_dir_all(&cfg.output_dir)?;
    let path = cfg.output_dir.join(name);
    fs::write(&path, body)?;
    Ok(path)
}

fn power_front_files(cfg: &RunConfig) -> Result<(Vec<PathBuf>, String), RunError> {
    let template = cfg.power_problem(f64::NAN, f64::NAN);
    let mut files = Vec::new();
    let mut summary = String::new();
    for &rho in &cfg.rho_list {
        let front = ParetoFront::new(
            Scenario::Power,
            rho,
            power_scenario::pareto_front(&cfg.e_max_list, rho, &template),
        );
        let rows = &front.rows;
        let mut body = header(cfg);
        match cfg.format {
            OutputFormat::Csv => {
                body.push_str(
                    "e_max_j,status,latency_bound_s,comp_quantile_s,tx_quantile_s,tx_quantile_exact_s,q_star,fc_star_hz,e_comp_j,e_tx_j,convexity_certified,clipped\n",
                );
                for (e_max, r) in rows {
                    match r {
                        Ok(s) => body.push_str(&format!(
                            "{},ok,{},{},{},{},{},{},{},{},{},{}\n",
                            fmt_g(*e_max),
                            fmt_g(s.latency_bound),
                            fmt_g(s.comp_quantile),
                            fmt_g(s.tx_quantile),
                            fmt_g(s.tx_quantile_exact),
                            fmt_g(s.q_star),
                            fmt_g(s.fc_star),
                            fmt_g(s.e_comp),
                            fmt_g(s.e_tx),
                            s.convexity_certified,
                            s.clipped,
                        )),
                        Err(e) => body.push_str(&format!(
                            "{},infeasible,nan,nan,nan,nan,nan,nan,nan,nan,false,false # {e}\n",
                            fmt_g(*e_max)
                        )),
                    }
                }
            }
            OutputFormat::Dat => {
                // two-column (latency, energy) rows for direct plotting
                body.push_str("# columns: latency_bound_s total_energy_j\n");
                for (e_max, r) in rows {
                    if let Ok(s) = r {
                        body.push_str(&format!(
                            "{} {}\n",
                            fmt_g(s.latency_bound),
                            fmt_g(*e_max)
                        ));
                    }
                }
            }
        }
        let name = rho_file_name("power_front", rho, cfg.format);
        files.push(write_file(cfg, &name, &body)?);
        let feasible = rows.iter().filter(|(_, r)| r.is_ok()).count();
        summary.push_str(&format!(
            "power front rho={rho}: {feasible}/{} feasible rows -> {name}\n",
            rows.len()
        ));
    }
    Ok((files, summary))
}

fn time_front_files(cfg: &RunConfig) -> Result<(Vec<PathBuf>, String), RunError> {
    let template = cfg.time_problem(f64::NAN, f64::NAN);
    let mut files = Vec::new();
    let mut summary = String::new();
    for &rho in &cfg.rho_list {
        let front = ParetoFront::new(
            Scenario::Time,
            rho,
            time_scenario::pareto_front(&cfg.t_list, rho, &template),
        );
        let rows = &front.rows;
        let mut body = header(cfg);
        match cfg.format {
            OutputFormat::Csv => {
                body.push_str(
                    "t_slot_s,status,qaoi_s,total_energy_j,alpha_star,q_star,fc_star_hz,e_comp_j,e_tx_j,p_succ,eps_c,eps_tx,n_tx,n_needed\n",
                );
                for (t, r) in rows {
                    match r {
                        Ok(s) => body.push_str(&format!(
                            "{},ok,{},{},{},{},{},{},{},{},{},{},{},{}\n",
                            fmt_g(*t),
                            fmt_g(s.qaoi),
                            fmt_g(s.total_energy),
                            fmt_g(s.alpha_star),
                            fmt_g(s.q_star),
                            fmt_g(s.fc_star),
                            fmt_g(s.e_comp),
                            fmt_g(s.e_tx),
                            fmt_g(s.p_succ),
                            fmt_g(s.eps_c),
                            fmt_g(s.eps_tx),
                            s.n_tx,
                            s.n_needed,
                        )),
                        Err(e) => body.push_str(&format!(
                            "{},infeasible,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan,0,0 # {e}\n",
                            fmt_g(*t)
                        )),
                    }
                }
            }
            OutputFormat::Dat => {
                body.push_str("# columns: qaoi_s total_energy_j\n");
                for (_, r) in rows {
                    if let Ok(s) = r {
                        body.push_str(&format!(
                            "{} {}\n",
                            fmt_g(s.qaoi),
                            fmt_g(s.total_energy)
                        ));
                    }
                }
            }
        }
        let name = rho_file_name("time_front", rho, cfg.format);
        files.push(write_file(cfg, &name, &body)?);
        let feasible = rows.iter().filter(|(_, r)| r.is_ok()).count();
        summary.push_str(&format!(
            "time front rho={rho}: {feasible}/{} feasible rows -> {name}\n",
            rows.len()
        ));
    }
    Ok((files, summary))
}

fn validate_file(cfg: &RunConfig) -> Result<(Vec<PathBuf>, String, bool), RunError> {
    let results = validate::run_all(cfg);
    let mut body = header(cfg);
    body.push_str(&validate::report(&results));
    // informational: how far the Gaussian stand-in for the transmission
    // time sits from the exact negative-binomial CDF as N grows
    let t_p = comm_model::packet_time(&cfg.params.chan);
    body.push_str("# gaussian approximation sup-norm deviation vs packet count:\n");
    for n in [50u64, 200, 500] {
        let d = crate::montecarlo::gaussian_approx_error(n, cfg.params.chan.eps, t_p);
        body.push_str(&format!("#   N = {n:4}: {d:.6e}\n"));
    }
    let path = write_file(cfg, "validation_report.txt", &body)?;
    let passed = validate::all_passed(&results);
    Ok((vec![path], validate::report(&results), passed))
}

/// Execute the configured scenario and write its files.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    cfg.validate().map_err(|e| RunError::Setup(e.to_string()))?;
    match cfg.scenario {
        Scenario::Power => {
            let (files, summary) = power_front_files(cfg)?;
            Ok(RunOutcome { files, validation_passed: None, summary })
        }
        Scenario::Time => {
            let (files, summary) = time_front_files(cfg)?;
            Ok(RunOutcome { files, validation_passed: None, summary })
        }
        Scenario::Validate => {
            let (files, summary, passed) = validate_file(cfg)?;
            Ok(RunOutcome { files, validation_passed: Some(passed), summary })
        }
    }
}
