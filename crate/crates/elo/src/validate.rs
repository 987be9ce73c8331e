//! The oracle suite behind `elo validate`: every analytic formula checked
//! against an independent route (closed forms, exhaustive enumeration,
//! quadrature-free series, brute-force search, or Monte Carlo), with one
//! pass/fail line per criterion.
//!
//! Thresholds are pinned here as constants; nothing is tuned at run time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comm_model;
use crate::comp_model;
use crate::config::RunConfig;
use crate::montecarlo::{self, SimConfig};
use crate::power_scenario::{self, PowerProblem};
use crate::specfun;
use crate::time_scenario::{self, TimeProblem};

const ENERGY_IDENTITY_REL_TOL: f64 = 1e-9;
const CERTIFICATE_REL_SLACK: f64 = 1e-6;
const SHAPE_REL_SLACK: f64 = 1e-6;
const GAMMA_Q_CLOSED_FORM_TOL: f64 = 1e-10;
const NBINOM_ABS_TOL: f64 = 1e-12;
const PROBIT_ABS_TOL: f64 = 1e-8;
const TX_FAILURE_ABS_TOL: f64 = 1e-12;
const FRONT_MIN_ENERGY_DROP: f64 = 0.05;
const SHAPE_PLATEAU_MIN: f64 = 0.99;
const SHAPE_COLLAPSE_MAX: f64 = 0.01;
const MC_SIGMA: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn line(&self) -> String {
        format!(
            "{} criterion {:2} ({}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// Run all ten criteria and return their results in order.
pub fn run_all(cfg: &RunConfig) -> Vec<CriterionResult> {
    vec![
        criterion1_energy_identity(cfg),
        criterion2_bound_dominance(cfg),
        criterion3_convexity_certificate(cfg),
        criterion4_specfun_oracles(cfg),
        criterion5_tx_failure_exactness(cfg),
        criterion6_truncated_mean_mc(cfg),
        criterion7_time_solver_soundness(cfg),
        criterion8_pareto_monotonicity(cfg),
        criterion9_shape_reproduction(cfg),
        criterion10_determinism(cfg),
    ]
}

/// Text report: one line per criterion plus a summary line.
pub fn report(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&r.line());
        s.push('\n');
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        s.push_str(&format!("all {} criteria passed\n", results.len()));
    } else {
        s.push_str(&format!("{failed} of {} criteria FAILED\n", results.len()));
    }
    s
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}

// --- criterion 1 ----------------------------------------------------------

pub fn criterion1_energy_identity(cfg: &RunConfig) -> CriterionResult {
    let template = cfg.power_problem(0.1, 0.9);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sim.seed ^ 0xC1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let q = rng.gen_range(1.0001..template.comp.q_max);
        let comm = template.comm_floor() / q;
        let e_max = comm * rng.gen_range(1.001..2.5);
        let prob = PowerProblem { e_max, ..template };
        let rel = match power_scenario::fc_star(q, &prob) {
            Ok(f) => {
                // energy at the unclipped frequency, which may sit outside
                // the hardware range; the identity is about the analytic value
                let mc = comp_model::mean_complexity(q, &prob.comp).unwrap();
                let e_comp = prob.comp.ps_max * mc * prob.comp.d_bits * f.unclipped
                    * f.unclipped
                    / prob.comp.fc_max.powi(3);
                ((e_comp + comm) - e_max).abs() / e_max
            }
            Err(e) => {
                return CriterionResult {
                    id: 1,
                    name: "energy-equality-identity",
                    passed: false,
                    detail: format!("fc_star failed on a feasible draw: {e}"),
                }
            }
        };
        worst = worst.max(rel);
    }
    CriterionResult {
        id: 1,
        name: "energy-equality-identity",
        passed: worst <= ENERGY_IDENTITY_REL_TOL,
        detail: format!("max relative energy error {worst:.3e} over 1000 draws (tol {ENERGY_IDENTITY_REL_TOL:.0e})"),
    }
}

// --- criterion 2 ----------------------------------------------------------

pub fn criterion2_bound_dominance(cfg: &RunConfig) -> CriterionResult {
    let template = cfg.power_problem(0.1, 0.9);
    let comp = &template.comp;
    let chan = &template.chan;
    // Q grid aligned to integer packet counts so the continuous-N bound is
    // not charged for ceiling slack it never models; the 1e-9 nudge keeps
    // ceil(D/(Q n_p)) from landing one packet high under f64 rounding.
    let base = comm_model::num_packets(1.0, comp.d_bits, chan.n_p);
    let q_targets = [1.111, 1.163, 1.190, 1.220, 1.250];
    let qs: Vec<f64> = q_targets
        .iter()
        .map(|qt| {
            let n = ((base as f64) / qt).round().max(1.0);
            (comp.d_bits / (n * chan.n_p as f64) * (1.0 + 1e-9)).min(comp.q_max)
        })
        .collect();
    let span = comp.fc_max - comp.fc_min;
    let fcs: Vec<f64> = (0..5).map(|i| comp.fc_min + (0.05 + 0.125 * i as f64) * span).collect();
    let sim = SimConfig { n_samples: cfg.sim.n_samples, seed: cfg.sim.seed, antithetic: false };
    let mut worst = f64::INFINITY;
    let mut worst_at = String::new();
    for &q in &qs {
        for &fc in &fcs {
            for &rho in &[0.9, 0.99] {
                let prob = PowerProblem { rho, ..template };
                let bound = match power_scenario::latency_quantile_bound(q, fc, &prob) {
                    Ok(b) => b.total,
                    Err(e) => {
                        return CriterionResult {
                            id: 2,
                            name: "quantile-bound-dominance",
                            passed: false,
                            detail: format!("bound evaluation failed at (Q={q}, fc={fc}): {e}"),
                        }
                    }
                };
                let s = montecarlo::sample_latency(q, fc, &prob, &sim, &[rho]);
                let est = &s.quantiles[0];
                let margin = bound - (est.value - MC_SIGMA * est.std_error);
                if margin < worst {
                    worst = margin;
                    worst_at = format!("Q={q:.4}, fc={:.2} GHz, rho={rho}", fc / 1e9);
                }
            }
        }
    }
    CriterionResult {
        id: 2,
        name: "quantile-bound-dominance",
        passed: worst >= 0.0,
        detail: format!(
            "min (bound − empirical + {MC_SIGMA}·SE) = {worst:.3e} s at {worst_at}, 50 grid points, {} samples each", sim.n_samples
        ),
    }
}

// --- criterion 3 ----------------------------------------------------------

pub fn criterion3_convexity_certificate(cfg: &RunConfig) -> CriterionResult {
    let mut worst_rel: f64 = f64::INFINITY;
    let mut checked = 0usize;
    for &e_max in &cfg.e_max_list {
        let prob = cfg.power_problem(e_max, 0.9);
        let q_lo = 1.0 + cfg.theta_power;
        let step = 0.005;
        let mut qs = Vec::new();
        let mut q = q_lo;
        while q <= prob.comp.q_max {
            if power_scenario::convexity_condition(q, &prob) {
                qs.push(q);
            }
            q += step;
        }
        // second differences of β(Q) and of the full objective over the
        // certified, feasible stretch
        let betas: Vec<Option<f64>> =
            qs.iter().map(|&q| power_scenario::beta_of_q(q, &prob).ok()).collect();
        let objs: Vec<Option<f64>> = qs
            .iter()
            .map(|&q| {
                power_scenario::fc_star(q, &prob).ok().and_then(|f| {
                    (f.unclipped >= prob.comp.fc_min)
                        .then(|| {
                            power_scenario::latency_quantile_bound(
                                q,
                                f.clipped,
                                &prob,
                            )
                            .ok()
                            .map(|b| b.total)
                        })
                        .flatten()
                })
            })
            .collect();
        for series in [&betas, &objs] {
            // windows containing infeasible gaps are skipped outright
            let scale = series.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
            for w in series.windows(3) {
                if let (Some(a), Some(b), Some(c)) = (w[0], w[1], w[2]) {
                    let d2 = a - 2.0 * b + c;
                    worst_rel = worst_rel.min(d2 / scale);
                    checked += 1;
                }
            }
        }
    }
    let passed = checked > 0 && worst_rel >= -CERTIFICATE_REL_SLACK;
    CriterionResult {
        id: 3,
        name: "convexity-certificate",
        passed,
        detail: format!(
            "min relative second difference {worst_rel:.3e} over {checked} certified windows (slack −{CERTIFICATE_REL_SLACK:.0e})"
        ),
    }
}

// --- criterion 4 ----------------------------------------------------------

/// Series-based normal CDF, independent of the production path:
/// Φ(z) = 1/2 + φ(z)·Σ_{k≥0} z^{2k+1} / (1·3·⋯·(2k+1)).
fn normal_cdf_series(z: f64) -> f64 {
    let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut term = z;
    let mut sum = z;
    let mut k = 1.0;
    while term.abs() > 1e-18 && k < 500.0 {
        term *= z * z / (2.0 * k + 1.0);
        sum += term;
        k += 1.0;
    }
    0.5 + phi * sum
}

/// Exact binomial coefficients via Pascal's rule in u128.
fn choose_exact(n: usize, k: usize) -> f64 {
    let mut row = vec![0u128; n + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=i).rev() {
            row[j] += row[j - 1];
        }
    }
    row[k] as f64
}

pub fn criterion4_specfun_oracles(_cfg: &RunConfig) -> CriterionResult {
    // (a) shape-1 quantile against the exponential closed form
    let mut worst_q: f64 = 0.0;
    for &scale in &[1e-3, 0.37, 1.0, 7.3] {
        for &rho in &[0.01, 0.3, 0.5, 0.9, 0.99, 0.999] {
            let got = match specfun::gamma_quantile(1.0, scale, rho) {
                Ok(v) => v,
                Err(e) => {
                    return CriterionResult {
                        id: 4,
                        name: "specfun-oracles",
                        passed: false,
                        detail: format!("gamma_quantile failed: {e}"),
                    }
                }
            };
            let exact = -scale * (1.0 - rho).ln();
            worst_q = worst_q.max((got - exact).abs() / exact.abs().max(1e-12));
        }
    }
    // (b) negative-binomial CDF against exact-coefficient pmf summation
    let mut worst_nb: f64 = 0.0;
    for n in 1..=10u64 {
        for &eps in &[0.1f64, 0.5, 0.9] {
            let mut cum = 0.0;
            for k in n..=40 {
                cum += choose_exact((k - 1) as usize, (n - 1) as usize)
                    * (1.0 - eps).powi(n as i32)
                    * eps.powi((k - n) as i32);
                worst_nb = worst_nb.max((specfun::nbinom_cdf(n, eps, k) - cum).abs());
            }
        }
    }
    // (c) probit(0.9) against bisection on the series CDF
    let (mut lo, mut hi) = (0.0f64, 8.0f64);
    for _ in 0..100 {
        let m = 0.5 * (lo + hi);
        if normal_cdf_series(m) < 0.9 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let probit_oracle = 0.5 * (lo + hi);
    let probit_err = (specfun::probit(0.9).unwrap() - probit_oracle)
        .abs()
        .max((specfun::probit(0.9).unwrap() - 1.2815515655).abs());
    let passed = worst_q <= GAMMA_Q_CLOSED_FORM_TOL
        && worst_nb <= NBINOM_ABS_TOL
        && probit_err <= PROBIT_ABS_TOL;
    CriterionResult {
        id: 4,
        name: "specfun-oracles",
        passed,
        detail: format!(
            "gamma-quantile rel err {worst_q:.3e} (tol {GAMMA_Q_CLOSED_FORM_TOL:.0e}), nbinom abs err {worst_nb:.3e} (tol {NBINOM_ABS_TOL:.0e}), probit err {probit_err:.3e} (tol {PROBIT_ABS_TOL:.0e})"
        ),
    }
}

// --- criterion 5 ----------------------------------------------------------

pub fn criterion5_tx_failure_exactness(_cfg: &RunConfig) -> CriterionResult {
    let mut worst: f64 = 0.0;
    for n_tx in 1..=16u64 {
        for &eps in &[0.1f64, 0.5] {
            // enumerate all 2^{N_tx} delivery outcomes once, fold into a
            // histogram over the success count
            let mut hist = vec![0.0f64; (n_tx + 1) as usize];
            for mask in 0u32..(1u32 << n_tx) {
                let s = mask.count_ones() as usize;
                hist[s] += (1.0 - eps).powi(s as i32) * eps.powi((n_tx - s as u64) as i32);
            }
            for n in 1..=n_tx.min(8) {
                let brute: f64 = hist[..n as usize].iter().sum();
                let got = time_scenario::tx_failure(n, n_tx, eps);
                worst = worst.max((got - brute).abs());
            }
        }
    }
    // no-redundancy reduction ε_tx(N, N) = 1 − (1−ε)^N
    let mut worst_red: f64 = 0.0;
    for n in 1..=16u64 {
        for &eps in &[0.1, 0.5, 0.001] {
            let got = time_scenario::tx_failure(n, n, eps);
            let exact = 1.0 - (1.0 - eps).powi(n as i32);
            worst_red = worst_red.max((got - exact).abs());
        }
    }
    let passed = worst <= TX_FAILURE_ABS_TOL && worst_red <= TX_FAILURE_ABS_TOL;
    CriterionResult {
        id: 5,
        name: "tx-failure-exactness",
        passed,
        detail: format!(
            "max |ε_tx − enumeration| {worst:.3e}, max reduction error {worst_red:.3e} (tol {TX_FAILURE_ABS_TOL:.0e})"
        ),
    }
}

// --- criterion 6 ----------------------------------------------------------

pub fn criterion6_truncated_mean_mc(cfg: &RunConfig) -> CriterionResult {
    let t_slot = cfg.t_list.first().copied().unwrap_or(0.4);
    let prob = cfg.time_problem(t_slot, 0.999);
    let points = [
        (0.35, 1.2, 1.6e9),
        (0.1, 1.1, 0.9e9),
        (0.25, 1.35, 2.0e9),
        (0.3, 1.5, 2.4e9),
        (0.05, 1.05, 1.0e9),
    ];
    let mut worst_sigmas: f64 = 0.0;
    for (i, &(alpha, q, fc)) in points.iter().enumerate() {
        let analytic = match time_scenario::truncated_comp_mean(alpha, q, fc, &prob) {
            Ok(v) => v,
            Err(e) => {
                return CriterionResult {
                    id: 6,
                    name: "truncated-mean-oracle",
                    passed: false,
                    detail: format!("analytic mean failed at point {i}: {e}"),
                }
            }
        };
        let scale = comp_model::compression_time_dist(q, fc, &prob.comp).unwrap().scale;
        let deadline = alpha * prob.t_slot;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.sim.seed ^ (0xC6 + i as u64));
        let (mut sum, mut sum2, mut kept) = (0.0, 0.0, 0u64);
        for _ in 0..(10 * cfg.sim.n_samples) {
            let t = montecarlo::gamma_sample(&mut rng, prob.comp.kappa) * scale;
            if t < deadline {
                sum += t;
                sum2 += t * t;
                kept += 1;
            }
        }
        let mean = sum / kept as f64;
        let var = (sum2 / kept as f64 - mean * mean).max(0.0);
        let se = (var / kept as f64).sqrt();
        worst_sigmas = worst_sigmas.max((analytic - mean).abs() / se);
    }
    CriterionResult {
        id: 6,
        name: "truncated-mean-oracle",
        passed: worst_sigmas <= MC_SIGMA,
        detail: format!(
            "max |analytic − MC| = {worst_sigmas:.2} SE over 5 points, {} conditional samples (tol {MC_SIGMA} SE)", 10 * cfg.sim.n_samples
        ),
    }
}

// --- criterion 7 ----------------------------------------------------------

pub fn criterion7_time_solver_soundness(cfg: &RunConfig) -> CriterionResult {
    let mut prob = cfg.time_problem(0.4, 0.999);
    prob.theta = 0.02;
    let sol = match time_scenario::solve(&prob) {
        Ok(s) => s,
        Err(e) => {
            return CriterionResult {
                id: 7,
                name: "time-solver-soundness",
                passed: false,
                detail: format!("solver failed: {e}"),
            }
        }
    };
    // independent brute force over the identical grid and tie-break
    let brute = brute_force_time(&prob);
    let Some((be, ba, bq, bfc)) = brute else {
        return CriterionResult {
            id: 7,
            name: "time-solver-soundness",
            passed: false,
            detail: "brute force found no feasible point but the solver did".into(),
        };
    };
    let exact_match = be == sol.total_energy
        && ba == sol.alpha_star
        && bq == sol.q_star
        && bfc == sol.fc_star;
    // re-simulated reliability at the returned point
    let sim =
        SimConfig { n_samples: cfg.sim.n_samples, seed: cfg.sim.seed ^ 0xC7, antithetic: false };
    let slot = montecarlo::simulate_slot(
        sol.alpha_star,
        sol.q_star,
        sol.fc_star,
        &prob,
        &sim,
        cfg.skip_tx_on_comp_failure,
    );
    let reliable = slot.p_succ_hat >= prob.rho - MC_SIGMA * slot.p_succ_se.max(1e-6);
    CriterionResult {
        id: 7,
        name: "time-solver-soundness",
        passed: exact_match && reliable,
        detail: format!(
            "brute-force match: {exact_match} (α*={}, Q*={:.2}, f_c*={:.4} GHz, E={:.6} J); re-simulated P_succ {:.5} vs ϱ {} (SE {:.1e})",
            sol.alpha_star, sol.q_star, sol.fc_star / 1e9, sol.total_energy, slot.p_succ_hat, prob.rho, slot.p_succ_se
        ),
    }
}

fn brute_force_time(prob: &TimeProblem) -> Option<(f64, f64, f64, f64)> {
    let alphas = time_scenario::alpha_grid(prob).ok()?;
    let qs = time_scenario::q_grid(prob);
    let eta = comm_model::energy_efficiency(&prob.chan);
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for &alpha in &alphas {
        let n_tx = time_scenario::tx_count(alpha, prob);
        let e_tx = prob.chan.n_p as f64 * n_tx as f64 / eta;
        for &q in &qs {
            let n_needed = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
            if n_tx < n_needed {
                continue;
            }
            let Ok(Some(fc)) = time_scenario::fc_opt(alpha, q, prob) else { continue };
            let e = time_scenario::comp_energy_time(alpha, q, fc, prob).unwrap() + e_tx;
            let better = match &best {
                None => true,
                Some(b) => (e, alpha, q) < (b.0, b.1, b.2),
            };
            if better {
                best = Some((e, alpha, q, fc));
            }
        }
    }
    best
}

// --- criterion 8 ----------------------------------------------------------

pub fn criterion8_pareto_monotonicity(cfg: &RunConfig) -> CriterionResult {
    // power front: latency non-increasing in the energy budget
    let template = cfg.power_problem(0.1, 0.9);
    let rows = power_scenario::pareto_front(&cfg.e_max_list, 0.9, &template);
    let mut prev = f64::INFINITY;
    let mut power_ok = true;
    for (e_max, r) in &rows {
        match r {
            Ok(s) => {
                if s.latency_bound > prev * (1.0 + 1e-12) {
                    power_ok = false;
                }
                prev = s.latency_bound;
            }
            Err(e) => {
                return CriterionResult {
                    id: 8,
                    name: "pareto-monotonicity",
                    passed: false,
                    detail: format!("power front infeasible at E_max={e_max}: {e}"),
                }
            }
        }
    }
    // time front at a finer grid than the default for tighter packing
    let mut t_template = cfg.time_problem(0.4, 0.999);
    t_template.theta = 0.005;
    let t_list = [0.4, 0.45, 0.5];
    let trows = time_scenario::pareto_front(&t_list, 0.999, &t_template);
    let mut energies = Vec::new();
    for (t, r) in &trows {
        match r {
            Ok(s) => energies.push(s.total_energy),
            Err(e) => {
                return CriterionResult {
                    id: 8,
                    name: "pareto-monotonicity",
                    passed: false,
                    detail: format!("time front infeasible at T={t}: {e}"),
                }
            }
        }
    }
    let time_mono = energies.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let drop = (energies[0] - energies[energies.len() - 1]) / energies[0];
    let passed = power_ok && time_mono && drop >= FRONT_MIN_ENERGY_DROP;
    CriterionResult {
        id: 8,
        name: "pareto-monotonicity",
        passed,
        detail: format!(
            "power front monotone: {power_ok}; time front monotone: {time_mono}; energy drop T=0.4→0.5: {:.2}% (need ≥ {:.0}%)",
            100.0 * drop,
            100.0 * FRONT_MIN_ENERGY_DROP
        ),
    }
}

// --- criterion 9 ----------------------------------------------------------

pub fn criterion9_shape_reproduction(cfg: &RunConfig) -> CriterionResult {
    // (a) latency-vs-Q curves convex at every budget in the sweep
    let mut min_d2_rel: f64 = f64::INFINITY;
    for &e_max in &cfg.e_max_list {
        let prob = cfg.power_problem(e_max, 0.9);
        let mut vals = Vec::new();
        let mut q = 1.005;
        while q <= prob.comp.q_max {
            let v = power_scenario::fc_star(q, &prob).ok().and_then(|f| {
                (f.unclipped >= prob.comp.fc_min)
                    .then(|| {
                        power_scenario::latency_quantile_bound(q, f.clipped, &prob)
                            .ok()
                            .map(|b| b.total)
                    })
                    .flatten()
            });
            vals.push(v);
            q += 0.005;
        }
        let scale = vals.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
        for w in vals.windows(3) {
            if let (Some(a), Some(b), Some(c)) = (w[0], w[1], w[2]) {
                min_d2_rel = min_d2_rel.min((a - 2.0 * b + c) / scale);
            }
        }
    }
    let convex_ok = min_d2_rel >= -SHAPE_REL_SLACK;

    // (b) P_succ vs α at (Q = 1.2, f_c = 1.6 GHz): a plateau above 0.99
    // followed by a collapse below 0.01
    let prob = cfg.time_problem(0.4, 0.999);
    let (q_b, fc_b) = (1.2, 1.6e9);
    let mut curve_b = Vec::new();
    for i in 0..100 {
        let alpha = i as f64 * 0.01;
        let ec = time_scenario::compression_failure(alpha, q_b, fc_b, &prob).unwrap();
        let n = comm_model::num_packets(q_b, prob.comp.d_bits, prob.chan.n_p);
        let etx =
            time_scenario::tx_failure(n, time_scenario::tx_count(alpha, &prob), prob.chan.eps);
        curve_b.push((1.0 - ec) * (1.0 - etx));
    }
    let peak_b = curve_b.iter().cloned().fold(0.0f64, f64::max);
    let argmax_b = curve_b
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let tail_min_b = curve_b[argmax_b..].iter().cloned().fold(f64::INFINITY, f64::min);
    let alpha_shape_ok = peak_b > SHAPE_PLATEAU_MIN && tail_min_b < SHAPE_COLLAPSE_MAX;

    // (c) P_succ vs Q at (α = 0.35, f_c = 1.6 GHz): the rectified-S shape
    let (alpha_c, fc_c) = (0.35, 1.6e9);
    let mut curve_c = Vec::new();
    let mut q = 1.0;
    while q <= prob.comp.q_max + 1e-9 {
        let ec = time_scenario::compression_failure(alpha_c, q, fc_c, &prob).unwrap();
        let n = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
        let etx = time_scenario::tx_failure(
            n,
            time_scenario::tx_count(alpha_c, &prob),
            prob.chan.eps,
        );
        curve_c.push((1.0 - ec) * (1.0 - etx));
        q += 0.005;
    }
    let peak_c = curve_c.iter().cloned().fold(0.0f64, f64::max);
    let start_c = curve_c[0];
    let end_c = *curve_c.last().unwrap();
    let q_shape_ok =
        start_c < SHAPE_COLLAPSE_MAX && peak_c > prob.rho && end_c <= peak_c - 0.01;

    let passed = convex_ok && alpha_shape_ok && q_shape_ok;
    CriterionResult {
        id: 9,
        name: "shape-reproduction",
        passed,
        detail: format!(
            "latency-vs-Q min d² {min_d2_rel:.2e} rel (ok={convex_ok}); P_succ-vs-α peak {peak_b:.4}, post-peak min {tail_min_b:.1e} (ok={alpha_shape_ok}); P_succ-vs-Q start {start_c:.1e}, peak {peak_c:.5}, end {end_c:.4} (ok={q_shape_ok})"
        ),
    }
}

// --- criterion 10 ---------------------------------------------------------

pub fn criterion10_determinism(cfg: &RunConfig) -> CriterionResult {
    // Reduced-sample re-run of the stochastic pipeline, twice, byte-compared.
    let run_once = || {
        let prob = cfg.power_problem(0.1, 0.9);
        let sim = SimConfig {
            n_samples: cfg.sim.n_samples.min(20_000),
            seed: cfg.sim.seed,
            antithetic: cfg.sim.antithetic,
        };
        let lat = montecarlo::sample_latency(1.2, 1.6e9, &prob, &sim, &[0.9, 0.99]);
        let tprob = cfg.time_problem(0.4, 0.999);
        let slot = montecarlo::simulate_slot(
            0.3,
            1.2,
            1.6e9,
            &tprob,
            &sim,
            cfg.skip_tx_on_comp_failure,
        );
        format!("{lat:?}|{slot:?}")
    };
    let a = run_once();
    let b = run_once();
    CriterionResult {
        id: 10,
        name: "determinism",
        passed: a == b,
        detail: if a == b {
            format!("two runs with seed {} produced byte-identical summaries", cfg.sim.seed)
        } else {
            "summaries differ between identically-seeded runs".into()
        },
    }
}
