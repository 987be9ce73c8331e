//! Time-constrained scenario: minimize total energy under a fixed slot
//! budget T (the QAoI target) and a reliability floor ϱ.
//!
//! The slot splits into a compression fraction α and a communication
//! fraction 1 − α. Compression that misses its deadline is forced to
//! terminate; the transmission slot is fully used by packet-level coding,
//! so decoding succeeds iff at least N of the N_tx sent packets arrive.
//! The (α, Q) plane is swept on a θ-grid with an inner binary search for
//! the cheapest feasible CPU frequency.

use std::fmt;

use crate::comm_model::{self, ChannelParams};
use crate::comp_model::{self, CompressionParams, ModelError};
use crate::specfun::{self, SpecFunError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeProblem {
    pub comp: CompressionParams,
    pub chan: ChannelParams,
    /// Slot budget T, s.
    pub t_slot: f64,
    /// Reliability target ϱ for P_succ.
    pub rho: f64,
    /// Grid resolution on α and Q.
    pub theta: f64,
    /// Binary-search tolerance on f_c, Hz.
    pub fc_tol: f64,
    /// Use the truncated-mean argument exactly as printed in the source
    /// model (the reciprocal of the standard orientation). Off by default.
    pub literal_trunc_arg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeError {
    /// Even maximal compression cannot fit one block in the slot, or no
    /// grid point meets the reliability target.
    Infeasible(String),
    Model(ModelError),
}

impl fmt::Display for TimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            TimeError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TimeError {}

impl From<ModelError> for TimeError {
    fn from(e: ModelError) -> Self {
        TimeError::Model(e)
    }
}

impl From<SpecFunError> for TimeError {
    fn from(e: SpecFunError) -> Self {
        TimeError::Model(ModelError::SpecFun(e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSolution {
    pub alpha_star: f64,
    pub q_star: f64,
    pub fc_star: f64,
    pub eps_c: f64,
    pub eps_tx: f64,
    /// (1 − ε_c)(1 − ε_tx) at the optimum.
    pub p_succ: f64,
    pub e_comp: f64,
    pub e_tx: f64,
    /// Total energy, the minimized objective.
    pub total_energy: f64,
    pub qaoi: f64,
    pub n_tx: u64,
    pub n_needed: u64,
}

impl TimeProblem {
    pub fn validate(&self) -> Result<(), TimeError> {
        self.comp.validate()?;
        self.chan.validate()?;
        if !(self.t_slot > 0.0) {
            return Err(TimeError::Model(ModelError::InvalidParam(format!(
                "t_slot must be > 0, got {}",
                self.t_slot
            ))));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(TimeError::Model(ModelError::InvalidParam(format!(
                "rho must be in (0, 1), got {}",
                self.rho
            ))));
        }
        if !(self.theta > 0.0) || !(self.fc_tol > 0.0) {
            return Err(TimeError::Model(ModelError::InvalidParam(
                "theta and fc_tol must be > 0".into(),
            )));
        }
        Ok(())
    }
}

/// Largest usable compression fraction: the minimum packet count at Q_max
/// must still fit in the remaining slot,
/// α_max = 1 − ⌈D/(Q_max n_p)⌉·t_p/T.
pub fn alpha_max(prob: &TimeProblem) -> Result<f64, TimeError> {
    let n_star = comm_model::num_packets(prob.comp.q_max, prob.comp.d_bits, prob.chan.n_p);
    let t_p = comm_model::packet_time(&prob.chan);
    let floor = n_star as f64 * t_p;
    // equality leaves exactly the minimum packets and no compression time:
    // α_max = 0 is the boundary, anything shorter has no feasible split
    if prob.t_slot < floor {
        return Err(TimeError::Infeasible(format!(
            "slot {} s cannot fit the minimum {} packets ({} s)",
            prob.t_slot, n_star, floor
        )));
    }
    Ok(1.0 - floor / prob.t_slot)
}

/// ε_c(α, Q, f_c) = 1 − F_{T_c}(αT): the probability compression misses
/// its deadline. Zero at Q = 1, one when no time is allocated.
pub fn compression_failure(alpha: f64, q: f64, fc: f64, prob: &TimeProblem) -> Result<f64, TimeError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(TimeError::Model(ModelError::OutOfRange {
            what: "alpha",
            value: alpha,
            lo: 0.0,
            hi: 1.0,
        }));
    }
    if q <= 1.0 {
        return Ok(0.0);
    }
    let dist = comp_model::compression_time_dist(q, fc, &prob.comp)?;
    if alpha == 0.0 {
        return Ok(1.0);
    }
    Ok(specfun::reg_upper_gamma(dist.shape, alpha * prob.t_slot / dist.scale)?)
}

/// Packets that fit in the communication slot: N_tx = ⌊(1−α)T/t_p⌋.
pub fn tx_count(alpha: f64, prob: &TimeProblem) -> u64 {
    let t_p = comm_model::packet_time(&prob.chan);
    ((1.0 - alpha) * prob.t_slot / t_p).floor() as u64
}

/// Decoding failure probability with packet-level coding: the chance fewer
/// than `n_needed` of the `n_tx` sent packets are received,
/// ε_tx = Σ_{h<N} C(N_tx, h)(1−ε)^h ε^{N_tx−h}. One when N_tx < N.
pub fn tx_failure(n_needed: u64, n_tx: u64, eps: f64) -> f64 {
    if n_tx < n_needed {
        return 1.0;
    }
    if n_needed == 0 {
        return 0.0;
    }
    specfun::binom_cdf(n_needed - 1, n_tx, 1.0 - eps)
}

/// Mean compression time conditioned on finishing before the deadline,
/// E[T_c | T_c < αT] = scale·κ·P(κ+1, x)/P(κ, x) with x = αT/scale.
pub fn truncated_comp_mean(alpha: f64, q: f64, fc: f64, prob: &TimeProblem) -> Result<f64, TimeError> {
    if q <= 1.0 {
        return Ok(0.0);
    }
    let deadline = alpha * prob.t_slot;
    if deadline <= 0.0 {
        return Err(TimeError::Model(ModelError::InvalidParam(
            "truncated mean needs a positive deadline".into(),
        )));
    }
    let dist = comp_model::compression_time_dist(q, fc, &prob.comp)?;
    let x = if prob.literal_trunc_arg { dist.scale / deadline } else { deadline / dist.scale };
    let num = specfun::reg_lower_gamma(dist.shape + 1.0, x)?;
    let den = specfun::reg_lower_gamma(dist.shape, x)?;
    if den == 0.0 {
        // deadline far inside the lower tail; the conditional mass sits at
        // the deadline itself in the limit
        return Ok(0.0);
    }
    Ok(dist.scale * dist.shape * num / den)
}

/// Mean compression energy in the slot model: the success branch burns
/// until completion, the failure branch until the deadline,
/// E_c = ((1−ε_c)·E[T_c | T_c < αT] + ε_c·αT)·P_c(f_c).
pub fn comp_energy_time(alpha: f64, q: f64, fc: f64, prob: &TimeProblem) -> Result<f64, TimeError> {
    if q <= 1.0 {
        return Ok(0.0);
    }
    let deadline = alpha * prob.t_slot;
    if deadline <= 0.0 {
        return Ok(0.0);
    }
    let ec = compression_failure(alpha, q, fc, prob)?;
    let trunc = if ec < 1.0 { truncated_comp_mean(alpha, q, fc, prob)? } else { 0.0 };
    Ok(((1.0 - ec) * trunc + ec * deadline) * comp_model::cpu_power(fc, &prob.comp))
}

/// Communication energy with the slot fully used: E_tx = n_p·N_tx/η.
/// Independent of Q and f_c.
pub fn comm_energy_time(alpha: f64, prob: &TimeProblem) -> f64 {
    let n_tx = tx_count(alpha, prob);
    prob.chan.n_p as f64 * n_tx as f64 / comm_model::energy_efficiency(&prob.chan)
}

/// Query age of information for the slot layout: T plus the decompression
/// slot αT·f_{c,max}/f_b allocated after delivery.
pub fn qaoi(alpha: f64, prob: &TimeProblem) -> f64 {
    prob.t_slot + alpha * prob.t_slot * prob.comp.fc_max / prob.comp.f_b
}

/// Cheapest feasible CPU frequency for the pair (α, Q): the smallest
/// f_c ∈ [f_min, f_max] with (1−ε_c)(1−ε_tx) ≥ ϱ, to within `fc_tol`.
/// `Ok(None)` when even f_max cannot reach the target.
pub fn fc_opt(alpha: f64, q: f64, prob: &TimeProblem) -> Result<Option<f64>, TimeError> {
    let n_needed = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
    let n_tx = tx_count(alpha, prob);
    let etx = tx_failure(n_needed, n_tx, prob.chan.eps);
    if 1.0 - etx < prob.rho {
        return Ok(None);
    }
    if q <= 1.0 {
        // nothing to compress; any frequency works
        return Ok(Some(prob.comp.fc_min));
    }
    let p_succ = |fc: f64| -> Result<f64, TimeError> {
        Ok((1.0 - compression_failure(alpha, q, fc, prob)?) * (1.0 - etx))
    };
    if p_succ(prob.comp.fc_max)? < prob.rho {
        return Ok(None);
    }
    if p_succ(prob.comp.fc_min)? >= prob.rho {
        return Ok(Some(prob.comp.fc_min));
    }
    let (mut lo, mut hi) = (prob.comp.fc_min, prob.comp.fc_max);
    while hi - lo > prob.fc_tol {
        let mid = 0.5 * (lo + hi);
        if p_succ(mid)? >= prob.rho {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// α grid: multiples of θ up to min(α_max, 1 − θ).
pub fn alpha_grid(prob: &TimeProblem) -> Result<Vec<f64>, TimeError> {
    let upper = alpha_max(prob)?.min(1.0 - prob.theta);
    let n = (upper / prob.theta + 1e-9).floor() as u64;
    Ok((0..=n).map(|i| i as f64 * prob.theta).collect())
}

/// Q grid: 1 + multiples of θ up to Q_max.
pub fn q_grid(prob: &TimeProblem) -> Vec<f64> {
    let n = ((prob.comp.q_max - 1.0) / prob.theta + 1e-9).floor() as u64;
    (0..=n).map(|i| 1.0 + i as f64 * prob.theta).collect()
}

fn evaluate(alpha: f64, q: f64, fc: f64, prob: &TimeProblem) -> Result<TimeSolution, TimeError> {
    let eps_c = compression_failure(alpha, q, fc, prob)?;
    let n_needed = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
    let n_tx = tx_count(alpha, prob);
    let eps_tx = tx_failure(n_needed, n_tx, prob.chan.eps);
    let e_comp = comp_energy_time(alpha, q, fc, prob)?;
    let e_tx = comm_energy_time(alpha, prob);
    Ok(TimeSolution {
        alpha_star: alpha,
        q_star: q,
        fc_star: fc,
        eps_c,
        eps_tx,
        p_succ: (1.0 - eps_c) * (1.0 - eps_tx),
        e_comp,
        e_tx,
        total_energy: e_comp + e_tx,
        qaoi: qaoi(alpha, prob),
        n_tx,
        n_needed,
    })
}

/// Exhaustive (α, Q) grid search with the inner frequency bisection.
/// Ties break toward lowest energy, then lowest α, then lowest Q.
pub fn solve(prob: &TimeProblem) -> Result<TimeSolution, TimeError> {
    prob.validate()?;
    let alphas = alpha_grid(prob)?;
    let qs = q_grid(prob);
    let eta = comm_model::energy_efficiency(&prob.chan);
    let mut best: Option<(f64, f64, f64, f64)> = None; // (E, alpha, q, fc)
    for &alpha in &alphas {
        let n_tx = tx_count(alpha, prob);
        let e_tx = prob.chan.n_p as f64 * n_tx as f64 / eta;
        for &q in &qs {
            let n_needed = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
            if n_tx < n_needed {
                continue;
            }
            let Some(fc) = fc_opt(alpha, q, prob)? else { continue };
            let e = comp_energy_time(alpha, q, fc, prob)? + e_tx;
            let key = (e, alpha, q, fc);
            let better = match &best {
                None => true,
                Some(b) => (key.0, key.1, key.2) < (b.0, b.1, b.2),
            };
            if better {
                best = Some(key);
            }
        }
    }
    let (_, alpha, q, fc) =
        best.ok_or_else(|| TimeError::Infeasible("no grid point meets the reliability target".into()))?;
    evaluate(alpha, q, fc, prob)
}

/// One row per slot budget T, sorted ascending; infeasible budgets stay in
/// the output as errors.
pub fn pareto_front(
    t_list: &[f64],
    rho: f64,
    template: &TimeProblem,
) -> Vec<(f64, Result<TimeSolution, TimeError>)> {
    let mut list: Vec<f64> = t_list.to_vec();
    list.sort_by(|a, b| a.partial_cmp(b).unwrap());
    list.iter()
        .map(|&t_slot| {
            let prob = TimeProblem { t_slot, rho, ..*template };
            (t_slot, solve(&prob))
        })
        .collect()
}
