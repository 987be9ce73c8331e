//! Flat key-value run configuration: parsing, validation, defaults, and
//! the canonical echo that makes every output file self-describing.
//!
//! Keys map one-to-one onto model symbols (see README for the table).
//! dB/dBm-suffixed keys are converted to SI once, here; everything
//! downstream is bits, Hz, W, s, J.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::comm_model::ChannelParams;
use crate::comp_model::CompressionParams;
use crate::montecarlo::SimConfig;
use crate::power_scenario::PowerProblem;
use crate::time_scenario::TimeProblem;

/// Every physical constant of the model in one place.
///
/// Defaults reproduce the published operating regime. Two of them deserve
/// a note, echoed into every output header: the noise density default is
/// 5e-19 W/Hz (−153.01 dBm/Hz) and the transmit-power default 0.26 W —
/// the pair under which the default link carries t_p ≈ 0.67 ms and
/// η ≈ 5.73 Mbit/J, the regime the reference fronts live in. The printed
/// table value of −110 dBm/Hz puts the mean SNR at −25 dB, where no block
/// ever fits a sub-second slot; see the README for the derivation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub comp: CompressionParams,
    pub chan: ChannelParams,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            comp: CompressionParams {
                d_bits: 5e5,
                kappa: 1.25,
                psi: 3.5,
                zeta: 0.05,
                fc_min: 0.8e9,
                fc_max: 2.5e9,
                ps_max: 2.0,
                f_b: 2.5e9,
                q_max: 1.5,
            },
            chan: ChannelParams {
                p_tx: 0.26,
                bandwidth: 1e8,
                distance: 1000.0,
                path_loss_exp: 2.0,
                n0: 5e-19,
                k0: 10f64.powf(-2.7),
                nu: 1e-14,
                lambda_coef: 1e-15,
                eps: 0.001,
                n_p: 1000,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Power,
    Time,
    Validate,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Power => "power",
            Scenario::Time => "time",
            Scenario::Validate => "validate",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "power" => Ok(Scenario::Power),
            "time" => Ok(Scenario::Time),
            "validate" => Ok(Scenario::Validate),
            other => Err(format!("unknown scenario `{other}` (power | time | validate)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Dat,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Dat => "dat",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "dat" => Ok(OutputFormat::Dat),
            other => Err(format!("unknown format `{other}` (csv | dat)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub params: SystemParams,
    /// Energy budgets for the power-scenario sweep, J.
    pub e_max_list: Vec<f64>,
    /// Slot budgets for the time-scenario sweep, s.
    pub t_list: Vec<f64>,
    /// Reliability levels; one output file per entry.
    pub rho_list: Vec<f64>,
    pub theta_power: f64,
    pub theta_time: f64,
    pub fc_tol: f64,
    pub include_decomp_scale: bool,
    pub literal_trunc_arg: bool,
    pub skip_tx_on_comp_failure: bool,
    pub sim: SimConfig,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: Scenario::Validate,
            params: SystemParams::default(),
            e_max_list: vec![0.08, 0.085, 0.09, 0.095, 0.1, 0.11, 0.12],
            t_list: vec![0.4, 0.45, 0.5],
            rho_list: vec![0.9, 0.999],
            theta_power: 1e-4,
            theta_time: 0.01,
            fc_tol: 1e6,
            include_decomp_scale: true,
            literal_trunc_arg: false,
            skip_tx_on_comp_failure: false,
            sim: SimConfig::default(),
            output_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse { line: usize, msg: String },
    Domain { key: String, msg: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, msg } => write!(f, "config line {line}: {msg}"),
            ConfigError::Domain { key, msg } => write!(f, "config key `{key}`: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn watt_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn parse_f64(v: &str, line: usize, key: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>().map_err(|_| ConfigError::Parse {
        line,
        msg: format!("`{key}` expects a number, got `{v}`"),
    })
}

fn parse_u64(v: &str, line: usize, key: &str) -> Result<u64, ConfigError> {
    v.parse::<u64>().map_err(|_| ConfigError::Parse {
        line,
        msg: format!("`{key}` expects a non-negative integer, got `{v}`"),
    })
}

fn parse_bool(v: &str, line: usize, key: &str) -> Result<bool, ConfigError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::Parse { line, msg: format!("`{key}` expects true|false, got `{v}`") }),
    }
}

fn parse_list(v: &str, line: usize, key: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(|s| parse_f64(s.trim(), line, key))
        .collect()
}

/// Parse a flat `key = value` document. Missing keys take the defaults;
/// unknown keys are hard errors.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim();
        let v = value.trim();
        match key {
            "scenario" => {
                cfg.scenario = v
                    .parse()
                    .map_err(|msg: String| ConfigError::Parse { line, msg })?;
            }
            "output_dir" => cfg.output_dir = PathBuf::from(v),
            "format" => {
                cfg.format = v.parse().map_err(|msg: String| ConfigError::Parse { line, msg })?;
            }
            "d_bits" => cfg.params.comp.d_bits = parse_f64(v, line, key)?,
            "kappa" => cfg.params.comp.kappa = parse_f64(v, line, key)?,
            "psi" => cfg.params.comp.psi = parse_f64(v, line, key)?,
            "zeta" => cfg.params.comp.zeta = parse_f64(v, line, key)?,
            "fc_min_hz" => cfg.params.comp.fc_min = parse_f64(v, line, key)?,
            "fc_max_hz" => cfg.params.comp.fc_max = parse_f64(v, line, key)?,
            "ps_max_w" => cfg.params.comp.ps_max = parse_f64(v, line, key)?,
            "f_b_hz" => cfg.params.comp.f_b = parse_f64(v, line, key)?,
            "q_max" => cfg.params.comp.q_max = parse_f64(v, line, key)?,
            "p_tx_w" => cfg.params.chan.p_tx = parse_f64(v, line, key)?,
            "p_tx_dbm" => cfg.params.chan.p_tx = dbm_to_watt(parse_f64(v, line, key)?),
            "bandwidth_hz" => cfg.params.chan.bandwidth = parse_f64(v, line, key)?,
            "distance_m" => cfg.params.chan.distance = parse_f64(v, line, key)?,
            "path_loss_exp" => cfg.params.chan.path_loss_exp = parse_f64(v, line, key)?,
            "n0_w_per_hz" => cfg.params.chan.n0 = parse_f64(v, line, key)?,
            "n0_dbm_per_hz" => cfg.params.chan.n0 = dbm_to_watt(parse_f64(v, line, key)?),
            "k0" => cfg.params.chan.k0 = parse_f64(v, line, key)?,
            "k0_db" => cfg.params.chan.k0 = db_to_linear(parse_f64(v, line, key)?),
            "nu_j" => cfg.params.chan.nu = parse_f64(v, line, key)?,
            "lambda_j_per_bit" => cfg.params.chan.lambda_coef = parse_f64(v, line, key)?,
            "eps" => cfg.params.chan.eps = parse_f64(v, line, key)?,
            "n_p_bits" => cfg.params.chan.n_p = parse_u64(v, line, key)?,
            "e_max_list" => cfg.e_max_list = parse_list(v, line, key)?,
            "t_list" => cfg.t_list = parse_list(v, line, key)?,
            "rho_list" => cfg.rho_list = parse_list(v, line, key)?,
            "theta_power" => cfg.theta_power = parse_f64(v, line, key)?,
            "theta_time" => cfg.theta_time = parse_f64(v, line, key)?,
            "fc_tol_hz" => cfg.fc_tol = parse_f64(v, line, key)?,
            "include_decomp_scale" => cfg.include_decomp_scale = parse_bool(v, line, key)?,
            "literal_trunc_arg" => cfg.literal_trunc_arg = parse_bool(v, line, key)?,
            "skip_tx_on_comp_failure" => cfg.skip_tx_on_comp_failure = parse_bool(v, line, key)?,
            "n_samples" => cfg.sim.n_samples = parse_u64(v, line, key)?,
            "seed" => cfg.sim.seed = parse_u64(v, line, key)?,
            "antithetic" => cfg.sim.antithetic = parse_bool(v, line, key)?,
            other => {
                return Err(ConfigError::Parse { line, msg: format!("unknown key `{other}`") });
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let dom = |key: &str, msg: &str| ConfigError::Domain { key: key.into(), msg: msg.into() };
        let eps = self.params.chan.eps;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(dom("eps", "eps ∈ (0,1)"));
        }
        self.params
            .comp
            .validate()
            .map_err(|e| dom("compression params", &e.to_string()))?;
        self.params
            .chan
            .validate()
            .map_err(|e| dom("channel params", &e.to_string()))?;
        if self.e_max_list.is_empty() {
            return Err(dom("e_max_list", "must not be empty"));
        }
        if self.t_list.is_empty() {
            return Err(dom("t_list", "must not be empty"));
        }
        if self.rho_list.is_empty() || self.rho_list.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(dom("rho_list", "every rho ∈ (0,1)"));
        }
        if !(self.theta_power > 0.0) {
            return Err(dom("theta_power", "theta_power > 0"));
        }
        if !(self.theta_time > 0.0) {
            return Err(dom("theta_time", "theta_time > 0"));
        }
        if !(self.fc_tol > 0.0) {
            return Err(dom("fc_tol_hz", "fc_tol_hz > 0"));
        }
        self.sim.validate().map_err(|m| dom("n_samples", &m))?;
        Ok(())
    }

    /// Canonical echo: every parameter materialized, defaulted or not.
    /// `parse_config(emit())` reproduces the config exactly.
    pub fn emit(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("scenario", self.scenario.to_string());
        kv("output_dir", self.output_dir.display().to_string());
        kv("format", self.format.to_string());
        let c = &self.params.comp;
        kv("d_bits", c.d_bits.to_string());
        kv("kappa", c.kappa.to_string());
        kv("psi", c.psi.to_string());
        kv("zeta", c.zeta.to_string());
        kv("fc_min_hz", c.fc_min.to_string());
        kv("fc_max_hz", c.fc_max.to_string());
        kv("ps_max_w", c.ps_max.to_string());
        kv("f_b_hz", c.f_b.to_string());
        kv("q_max", c.q_max.to_string());
        let ch = &self.params.chan;
        kv("p_tx_w", ch.p_tx.to_string());
        kv("bandwidth_hz", ch.bandwidth.to_string());
        kv("distance_m", ch.distance.to_string());
        kv("path_loss_exp", ch.path_loss_exp.to_string());
        kv("n0_w_per_hz", ch.n0.to_string());
        kv("k0", ch.k0.to_string());
        kv("nu_j", ch.nu.to_string());
        kv("lambda_j_per_bit", ch.lambda_coef.to_string());
        kv("eps", ch.eps.to_string());
        kv("n_p_bits", ch.n_p.to_string());
        kv("e_max_list", list(&self.e_max_list));
        kv("t_list", list(&self.t_list));
        kv("rho_list", list(&self.rho_list));
        kv("theta_power", self.theta_power.to_string());
        kv("theta_time", self.theta_time.to_string());
        kv("fc_tol_hz", self.fc_tol.to_string());
        kv("include_decomp_scale", self.include_decomp_scale.to_string());
        kv("literal_trunc_arg", self.literal_trunc_arg.to_string());
        kv("skip_tx_on_comp_failure", self.skip_tx_on_comp_failure.to_string());
        kv("n_samples", self.sim.n_samples.to_string());
        kv("seed", self.sim.seed.to_string());
        kv("antithetic", self.sim.antithetic.to_string());
        s
    }

    /// FNV-1a hash of the canonical echo: a short id stamped into every
    /// output file so a run can be traced back to its exact configuration.
    pub fn run_id(&self) -> String {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        for b in self.emit().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
        format!("{h:016x}")
    }

    pub fn power_problem(&self, e_max: f64, rho: f64) -> PowerProblem {
        PowerProblem {
            comp: self.params.comp,
            chan: self.params.chan,
            e_max,
            rho,
            theta: self.theta_power,
            include_decomp_scale: self.include_decomp_scale,
        }
    }

    pub fn time_problem(&self, t_slot: f64, rho: f64) -> TimeProblem {
        TimeProblem {
            comp: self.params.comp,
            chan: self.params.chan,
            t_slot,
            rho,
            theta: self.theta_time,
            fc_tol: self.fc_tol,
            literal_trunc_arg: self.literal_trunc_arg,
        }
    }
}
