//! Power-constrained scenario: minimize the ϱ-quantile of end-to-end
//! latency subject to a total energy budget.
//!
//! The energy constraint binds at the optimum, which pins f_c to an
//! explicit function of Q; the remaining scalar problem in Q is solved by
//! derivative-sign bisection under an analytic convexity certificate, with
//! a golden-section fallback when the certificate fails. The uncompressed
//! Q = 1 corner is always evaluated as well, since at high reliability it
//! can dominate every compressed configuration.

use std::fmt;

use crate::comm_model::{self, ChannelParams};
use crate::comp_model::{self, CompressionParams, ModelError};
use crate::specfun::{self, SpecFunError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProblem {
    pub comp: CompressionParams,
    pub chan: ChannelParams,
    /// Total energy budget, J.
    pub e_max: f64,
    /// Latency reliability quantile ϱ.
    pub rho: f64,
    /// Search precision on Q.
    pub theta: f64,
    /// Apply the (1 + ζ f_c/f_b) decompression factor to the compression
    /// quantile (on by default; disable to reproduce the bound without it).
    pub include_decomp_scale: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PowerError {
    /// Energy budget below the communication floor at the given Q (or at
    /// Q_max, for whole-problem infeasibility).
    Infeasible { e_max: f64, needed: f64 },
    /// Q = 1 has no compression stage, so f_c*(Q) is undefined there.
    DegenerateQ,
    Model(ModelError),
}

impl fmt::Display for PowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerError::Infeasible { e_max, needed } => {
                write!(f, "infeasible: budget {e_max} J below communication floor {needed} J")
            }
            PowerError::DegenerateQ => write!(f, "f_c*(Q) is undefined at Q = 1"),
            PowerError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PowerError {}

impl From<ModelError> for PowerError {
    fn from(e: ModelError) -> Self {
        PowerError::Model(e)
    }
}

impl From<SpecFunError> for PowerError {
    fn from(e: SpecFunError) -> Self {
        PowerError::Model(ModelError::SpecFun(e))
    }
}

/// Energy-equality frequency for a given Q, before and after clipping to
/// the hardware range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcStar {
    pub unclipped: f64,
    pub clipped: f64,
}

/// Latency-quantile bound split into its two addends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyBound {
    pub total: f64,
    pub comp_quantile: f64,
    pub tx_quantile: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSolution {
    pub q_star: f64,
    pub fc_star: f64,
    /// Bound on the ϱ-quantile of end-to-end latency at the optimum.
    pub latency_bound: f64,
    pub comp_quantile: f64,
    pub tx_quantile: f64,
    /// Exact ϱ-quantile of the transmission time with the ceiled packet
    /// count, reported alongside the continuous-N Gaussian bound.
    pub tx_quantile_exact: f64,
    pub e_comp: f64,
    pub e_tx: f64,
    pub convexity_certified: bool,
    pub clipped: bool,
}

impl PowerProblem {
    pub fn validate(&self) -> Result<(), PowerError> {
        self.comp.validate()?;
        self.chan.validate()?;
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(PowerError::Model(ModelError::InvalidParam(format!(
                "rho must be in (0, 1), got {}",
                self.rho
            ))));
        }
        if !(self.theta > 0.0) {
            return Err(PowerError::Model(ModelError::InvalidParam(format!(
                "theta must be > 0, got {}",
                self.theta
            ))));
        }
        let floor = self.comm_floor() / self.comp.q_max;
        if self.e_max <= floor {
            return Err(PowerError::Infeasible { e_max: self.e_max, needed: floor });
        }
        Ok(())
    }

    /// C = D/((1−ε)η): the communication energy at Q = 1 with continuous N.
    pub fn comm_floor(&self) -> f64 {
        self.comp.d_bits / ((1.0 - self.chan.eps) * comm_model::energy_efficiency(&self.chan))
    }
}

/// Energy-equality frequency: the f_c at which compression plus communication
/// energy exactly exhausts the budget at ratio Q,
/// f_c* = sqrt((E_max − D/((1−ε)Qη)) / (E[X_c]·D·P_{s,max}/f_max³)).
pub fn fc_star(q: f64, prob: &PowerProblem) -> Result<FcStar, PowerError> {
    if q <= 1.0 {
        return Err(PowerError::DegenerateQ);
    }
    let comm = prob.comm_floor() / q;
    let headroom = prob.e_max - comm;
    if headroom <= 0.0 {
        return Err(PowerError::Infeasible { e_max: prob.e_max, needed: comm });
    }
    let mc = comp_model::mean_complexity(q, &prob.comp)?;
    let f3 = prob.comp.fc_max.powi(3);
    let denom = mc * prob.comp.d_bits * prob.comp.ps_max / f3;
    let unclipped = (headroom / denom).sqrt();
    Ok(FcStar { unclipped, clipped: unclipped.clamp(prob.comp.fc_min, prob.comp.fc_max) })
}

/// Sum-of-quantiles bound on the latency ϱ-quantile at (Q, f_c): decompression-scaled
/// Gamma quantile plus the Gaussian transmission quantile with continuous N.
pub fn latency_quantile_bound(q: f64, fc: f64, prob: &PowerProblem) -> Result<LatencyBound, PowerError> {
    let comp_q = if q > 1.0 {
        let dist = comp_model::compression_time_dist(q, fc, &prob.comp)?;
        let scale = if prob.include_decomp_scale {
            comp_model::decompression_scale(fc, &prob.comp)
        } else {
            1.0
        };
        scale * dist.quantile(prob.rho)?
    } else {
        0.0
    };
    let n = comm_model::num_packets_continuous(q, prob.comp.d_bits, prob.chan.n_p);
    let t_p = comm_model::packet_time(&prob.chan);
    let eps = prob.chan.eps;
    let z = specfun::probit(prob.rho)?;
    let tx_q = n * t_p / (1.0 - eps) + z * t_p * (eps * n).sqrt() / (1.0 - eps);
    Ok(LatencyBound { total: comp_q + tx_q, comp_quantile: comp_q, tx_quantile: tx_q })
}

/// β(Q) = K sqrt(E[X_c]³ / (E_max − C/Q)) with K = sqrt(D·P_{s,max}/f_max³)/κ;
/// the Q-dependent Gamma scale whose convexity the certificate checks. Equals
/// E[X_c]/(κ f_c*(Q)) identically.
pub fn beta_of_q(q: f64, prob: &PowerProblem) -> Result<f64, PowerError> {
    if q <= 1.0 {
        return Err(PowerError::DegenerateQ);
    }
    let headroom = prob.e_max - prob.comm_floor() / q;
    if headroom <= 0.0 {
        return Err(PowerError::Infeasible { e_max: prob.e_max, needed: prob.comm_floor() / q });
    }
    let mc = comp_model::mean_complexity(q, &prob.comp)?;
    let k = (prob.comp.d_bits * prob.comp.ps_max / prob.comp.fc_max.powi(3)).sqrt() / prob.comp.kappa;
    Ok(k * (mc.powi(3) / headroom).sqrt())
}

/// Analytic convexity condition Q²·3ψ²e^ψ − 2Q·E_max + C ≥ 0.
pub fn convexity_condition(q: f64, prob: &PowerProblem) -> bool {
    let a = 3.0 * prob.comp.psi * prob.comp.psi * prob.comp.psi.exp();
    a * q * q - 2.0 * q * prob.e_max + prob.comm_floor() >= 0.0
}

/// True iff the condition holds everywhere on [lo, hi]. The condition is an
/// upward parabola in Q, so it fails exactly between its real roots.
fn condition_holds_on(lo: f64, hi: f64, prob: &PowerProblem) -> bool {
    let a = 3.0 * prob.comp.psi * prob.comp.psi * prob.comp.psi.exp();
    let b = -2.0 * prob.e_max;
    let c = prob.comm_floor();
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return true;
    }
    let sq = disc.sqrt();
    let r1 = (-b - sq) / (2.0 * a);
    let r2 = (-b + sq) / (2.0 * a);
    // fails on (r1, r2); holds on [lo, hi] iff the intervals do not overlap
    r2 <= lo || r1 >= hi
}

/// Effective objective at Q: the latency bound with f_c*(Q) clipped to the
/// hardware range. Err when Q is infeasible (no energy headroom, or the
/// equality frequency falls below f_{c,min}).
fn objective(q: f64, prob: &PowerProblem) -> Result<f64, PowerError> {
    let f = fc_star(q, prob)?;
    if f.unclipped < prob.comp.fc_min {
        return Err(PowerError::Infeasible { e_max: prob.e_max, needed: f64::NAN });
    }
    Ok(latency_quantile_bound(q, f.clipped, prob)?.total)
}

/// Feasible-Q interval (qa, qb] inside (1, Q_max]: energy headroom positive
/// and f_c*(Q) ≥ f_{c,min}. Found by coarse scan plus bisection refinement.
fn feasible_interval(prob: &PowerProblem) -> Option<(f64, f64)> {
    let q_max = prob.comp.q_max;
    let c = prob.comm_floor();
    let q_energy_lo = if c >= prob.e_max { c / prob.e_max } else { 1.0 };
    if q_energy_lo >= q_max {
        return None;
    }
    let lo0 = q_energy_lo.max(1.0);
    let feasible = |q: f64| {
        fc_star(q, prob).map(|f| f.unclipped >= prob.comp.fc_min).unwrap_or(false)
    };
    // coarse scan for any feasible point
    const SCAN: usize = 128;
    let mut seed = None;
    for i in 1..=SCAN {
        let q = lo0 + (q_max - lo0) * i as f64 / SCAN as f64;
        if feasible(q) {
            seed = Some(q);
            break;
        }
    }
    let seed = seed?;
    // refine lower edge
    let mut lo = lo0;
    let mut hi = seed;
    for _ in 0..80 {
        let m = 0.5 * (lo + hi);
        if feasible(m) {
            hi = m;
        } else {
            lo = m;
        }
    }
    let qa = hi;
    // refine upper edge
    let qb = if feasible(q_max) {
        q_max
    } else {
        let mut lo = seed;
        let mut hi = q_max;
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if feasible(m) {
                lo = m;
            } else {
                hi = m;
            }
        }
        lo
    };
    (qb > qa).then_some((qa, qb))
}

fn golden_section(mut a: f64, mut b: f64, theta: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > theta {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Solve the power-constrained problem: scalar search over Q with the
/// Q = 1 corner evaluated explicitly.
pub fn solve(prob: &PowerProblem) -> Result<PowerSolution, PowerError> {
    prob.validate()?;
    let interval = feasible_interval(prob);
    let certified = interval
        .map(|(qa, qb)| condition_holds_on(qa, qb, prob))
        .unwrap_or(true);

    let mut best: Option<(f64, f64)> = None; // (latency, q)
    if let Some((qa, qb)) = interval {
        let obj = |q: f64| objective(q, prob).unwrap_or(f64::INFINITY);
        let q_star = if certified {
            // derivative-sign bisection on the certified-convex objective
            let (mut lo, mut hi) = (qa, qb);
            while hi - lo > prob.theta {
                let m = 0.5 * (lo + hi);
                let h = ((hi - lo) * 0.25).min(prob.theta).max(1e-9);
                if obj(m + h) >= obj(m - h) {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            0.5 * (lo + hi)
        } else {
            golden_section(qa, qb, prob.theta, obj)
        };
        // candidate polish: the found point and both interval ends
        for q in [q_star, qa + 0.25 * prob.theta, qb] {
            let v = obj(q);
            if v.is_finite() && best.map(|(bv, _)| v < bv).unwrap_or(true) {
                best = Some((v, q));
            }
        }
    }

    // Q = 1 corner: pure transmission, zero compression latency and energy
    let corner_feasible = prob.comm_floor() <= prob.e_max;
    if corner_feasible {
        let v = latency_quantile_bound(1.0, prob.comp.fc_min, prob)?.total;
        if best.map(|(bv, _)| v < bv).unwrap_or(true) {
            best = Some((v, 1.0));
        }
    }

    let (_, q_star) = best.ok_or(PowerError::Infeasible {
        e_max: prob.e_max,
        needed: prob.comm_floor() / prob.comp.q_max,
    })?;

    let t_p = comm_model::packet_time(&prob.chan);
    let n_exact = comm_model::num_packets(q_star, prob.comp.d_bits, prob.chan.n_p);
    let tx_quantile_exact =
        specfun::nbinom_quantile(n_exact, prob.chan.eps, prob.rho) as f64 * t_p;

    if q_star <= 1.0 {
        let b = latency_quantile_bound(1.0, prob.comp.fc_min, prob)?;
        return Ok(PowerSolution {
            q_star: 1.0,
            fc_star: prob.comp.fc_min,
            latency_bound: b.total,
            comp_quantile: 0.0,
            tx_quantile: b.tx_quantile,
            tx_quantile_exact,
            e_comp: 0.0,
            e_tx: prob.comm_floor(),
            convexity_certified: certified,
            clipped: false,
        });
    }

    let f = fc_star(q_star, prob)?;
    let clipped = f.unclipped > prob.comp.fc_max || f.unclipped < prob.comp.fc_min;
    let bound = latency_quantile_bound(q_star, f.clipped, prob)?;
    // With a clipped frequency the energy equality no longer holds; report
    // the energy actually consumed at the clipped point.
    let e_comp = comp_model::compression_energy(f.clipped, q_star, &prob.comp)?;
    let e_tx = prob.comm_floor() / q_star;
    Ok(PowerSolution {
        q_star,
        fc_star: f.clipped,
        latency_bound: bound.total,
        comp_quantile: bound.comp_quantile,
        tx_quantile: bound.tx_quantile,
        tx_quantile_exact,
        e_comp,
        e_tx,
        convexity_certified: certified,
        clipped,
    })
}

/// One front row per E_max; infeasible budgets are kept as explicit rows.
pub fn pareto_front(
    e_max_list: &[f64],
    rho: f64,
    template: &PowerProblem,
) -> Vec<(f64, Result<PowerSolution, PowerError>)> {
    let mut list: Vec<f64> = e_max_list.to_vec();
    list.sort_by(|a, b| a.partial_cmp(b).unwrap());
    list.iter()
        .map(|&e_max| {
            let prob = PowerProblem { e_max, rho, ..*template };
            (e_max, solve(&prob))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SystemParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(e_max: f64, rho: f64) -> PowerProblem {
        let p = SystemParams::default();
        PowerProblem {
            comp: p.comp,
            chan: p.chan,
            e_max,
            rho,
            theta: 1e-4,
            include_decomp_scale: true,
        }
    }

    #[test]
    fn energy_equality_identity() {
        let prob = problem(0.1, 0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let q = rng.gen_range(1.001..prob.comp.q_max);
            let comm = prob.comm_floor() / q;
            let e_max = comm * rng.gen_range(1.01..2.0);
            let p = PowerProblem { e_max, ..prob };
            let f = fc_star(q, &p).unwrap();
            let e_comp = p.comp.ps_max
                * comp_model::mean_complexity(q, &p.comp).unwrap()
                * p.comp.d_bits
                * f.unclipped
                * f.unclipped
                / p.comp.fc_max.powi(3);
            let total = e_comp + comm;
            assert!(
                (total - e_max).abs() <= 1e-9 * e_max,
                "identity off at q={q}: {total} vs {e_max}"
            );
        }
    }

    #[test]
    fn fc_star_errors() {
        let prob = problem(0.1, 0.9);
        assert!(matches!(fc_star(1.0, &prob), Err(PowerError::DegenerateQ)));
        // budget below the communication floor at this Q
        let poor = PowerProblem { e_max: 0.05, ..prob };
        assert!(matches!(fc_star(1.1, &poor), Err(PowerError::Infeasible { .. })));
        // Q → 1+ with budget above the floor blows up and clips to fc_max
        let rich = PowerProblem { e_max: 2.0 * prob.comm_floor(), ..prob };
        let f = fc_star(1.0 + 1e-9, &rich).unwrap();
        assert!(f.unclipped > prob.comp.fc_max);
        assert_eq!(f.clipped, prob.comp.fc_max);
    }

    #[test]
    fn fc_star_matches_bisection_on_energy_equality() {
        let prob = problem(0.1, 0.9);
        let q = 1.2;
        let comm = prob.comm_floor() / q;
        let energy = |fc: f64| {
            prob.comp.ps_max
                * comp_model::mean_complexity(q, &prob.comp).unwrap()
                * prob.comp.d_bits
                * fc
                * fc
                / prob.comp.fc_max.powi(3)
                + comm
        };
        let (mut lo, mut hi) = (0.0, 1e12);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if energy(m) < prob.e_max {
                lo = m;
            } else {
                hi = m;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let f = fc_star(q, &prob).unwrap();
        assert!(
            (f.unclipped - oracle).abs() <= 1e-7 * oracle,
            "fc* {} vs bisection {}",
            f.unclipped,
            oracle
        );
        assert!((f.unclipped - 3558977135.9665284).abs() < 1.0);
    }

    #[test]
    fn tx_quantile_trivial_cases() {
        let mut prob = problem(0.1, 0.5);
        // probit(0.5) = 0 → tx addend is the mean
        let b = latency_quantile_bound(1.2, 1.6e9, &prob).unwrap();
        let n = comm_model::num_packets_continuous(1.2, prob.comp.d_bits, prob.chan.n_p);
        let stats = comm_model::tx_time_stats(n, &prob.chan);
        assert!((b.tx_quantile - stats.mean).abs() < 1e-12 * stats.mean);
        // eps → 0: tx addend → N t_p
        prob.chan.eps = 1e-12;
        prob.rho = 0.9;
        let b = latency_quantile_bound(1.2, 1.6e9, &prob).unwrap();
        let t_p = comm_model::packet_time(&prob.chan);
        assert!((b.tx_quantile - n * t_p).abs() < 1e-6 * b.tx_quantile);
    }

    #[test]
    fn gamma_addend_strictly_decreasing_in_fc() {
        let prob = problem(0.1, 0.9);
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let fc = prob.comp.fc_min + (prob.comp.fc_max - prob.comp.fc_min) * i as f64 / 20.0;
            let b = latency_quantile_bound(1.3, fc, &prob).unwrap();
            assert!(b.comp_quantile < prev, "not decreasing at fc={fc}");
            prev = b.comp_quantile;
        }
    }

    #[test]
    fn comm_floor_is_continuous_q1_energy() {
        let prob = problem(0.1, 0.9);
        let via_model = comm_model::comm_energy(
            comm_model::num_packets_continuous(1.0, prob.comp.d_bits, prob.chan.n_p),
            &prob.chan,
        );
        assert!((prob.comm_floor() - via_model).abs() <= 1e-12 * via_model);
    }

    #[test]
    fn beta_identity_with_fc_star() {
        let prob = problem(0.11, 0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let q = rng.gen_range(1.01..prob.comp.q_max);
            let beta = beta_of_q(q, &prob).unwrap();
            let f = fc_star(q, &prob).unwrap();
            let mc = comp_model::mean_complexity(q, &prob.comp).unwrap();
            assert!(
                (beta * prob.comp.kappa * f.unclipped - mc).abs() <= 1e-9 * mc,
                "beta identity broke at q={q}"
            );
        }
    }

    #[test]
    fn beta_second_differences_nonnegative_under_condition() {
        let prob = problem(0.1, 0.9);
        let h = 1e-4;
        let mut q = 1.05;
        while q < prob.comp.q_max - h {
            if convexity_condition(q, &prob) && prob.e_max - prob.comm_floor() / (q - h) > 0.0 {
                let d2 = beta_of_q(q + h, &prob).unwrap() - 2.0 * beta_of_q(q, &prob).unwrap()
                    + beta_of_q(q - h, &prob).unwrap();
                assert!(d2 >= -1e-9 * beta_of_q(q, &prob).unwrap(), "β not convex at q={q}");
            }
            q += 0.01;
        }
    }

    #[test]
    fn convexity_condition_cases() {
        let mut prob = problem(1e-12, 0.9);
        // E_max → 0 keeps both surviving terms positive
        assert!(convexity_condition(0.5, &prob));
        assert!(convexity_condition(5.0, &prob));
        // negative discriminant → holds for all Q
        prob.e_max = 0.12;
        let a = 3.0 * prob.comp.psi.powi(2) * prob.comp.psi.exp();
        assert!(4.0 * prob.e_max * prob.e_max < 4.0 * a * prob.comm_floor());
        assert!(condition_holds_on(1.0, prob.comp.q_max, &prob));
        // flags must match the sign of the evaluated quadratic
        for i in 0..50 {
            let q = 1.0 + i as f64 * 0.01;
            let val = a * q * q - 2.0 * q * prob.e_max + prob.comm_floor();
            assert_eq!(convexity_condition(q, &prob), val >= 0.0);
        }
    }

    #[test]
    fn solve_matches_grid_scan() {
        let base = problem(0.1, 0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let e_max = rng.gen_range(0.062..0.15);
            let rho = rng.gen_range(0.6..0.999);
            let prob = PowerProblem { e_max, rho, ..base };
            let sol = match solve(&prob) {
                Ok(s) => s,
                Err(PowerError::Infeasible { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            // exhaustive theta-grid scan, including the corner
            let mut best = f64::INFINITY;
            if prob.comm_floor() <= e_max {
                best = latency_quantile_bound(1.0, prob.comp.fc_min, &prob).unwrap().total;
            }
            let mut k = 1u64;
            loop {
                let q = 1.0 + k as f64 * prob.theta;
                if q > prob.comp.q_max {
                    break;
                }
                if let Ok(v) = objective(q, &prob) {
                    best = best.min(v);
                }
                k += 1;
            }
            // allow the objective's variation across one theta step
            let slack = {
                let q = sol.q_star.clamp(1.0 + prob.theta, prob.comp.q_max - prob.theta);
                let a = objective(q, &prob).unwrap_or(best);
                let b = objective((q + prob.theta).min(prob.comp.q_max), &prob).unwrap_or(a);
                (a - b).abs() + 1e-12
            };
            assert!(
                sol.latency_bound <= best + slack,
                "solver {} vs scan {} (e_max={e_max}, rho={rho})",
                sol.latency_bound,
                best
            );
        }
    }

    #[test]
    fn front_monotone_and_budget_respected() {
        let prob = problem(0.1, 0.9);
        let rows = pareto_front(&[0.08, 0.085, 0.09, 0.095, 0.1, 0.11, 0.12], 0.9, &prob);
        let mut prev = f64::INFINITY;
        for (e_max, r) in &rows {
            let s = r.as_ref().expect("all budgets feasible here");
            assert!(s.latency_bound <= prev + 1e-12, "front not monotone at {e_max}");
            assert!(s.e_comp + s.e_tx <= e_max * (1.0 + 1e-9));
            assert!(
                (s.latency_bound - (s.comp_quantile + s.tx_quantile)).abs()
                    <= 1e-12 * s.latency_bound
            );
            prev = s.latency_bound;
        }
        // compressed optimum strictly beats the uncompressed baseline here
        let baseline = latency_quantile_bound(1.0, prob.comp.fc_min, &prob).unwrap().total;
        let at_budget = rows.iter().find(|(e, _)| *e >= prob.comm_floor()).unwrap();
        let s = at_budget.1.as_ref().unwrap();
        assert!(s.q_star > 1.0);
        assert!(s.latency_bound < baseline);
    }

    #[test]
    fn more_budget_never_hurts() {
        let prob = problem(0.1, 0.99);
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let e_max = 0.065 + i as f64 * 0.005;
            if let Ok(s) = solve(&PowerProblem { e_max, ..prob }) {
                assert!(s.latency_bound <= prev + 1e-12, "regression at e_max={e_max}");
                prev = s.latency_bound;
            }
        }
    }

    #[test]
    fn infeasible_budget_reported() {
        let prob = problem(0.01, 0.9);
        assert!(matches!(solve(&prob), Err(PowerError::Infeasible { .. })));
    }
}
