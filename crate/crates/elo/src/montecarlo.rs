//! Stochastic oracle for the analytic formulas: end-to-end latency
//! sampling for the power scenario, slot-deadline simulation for the time
//! scenario, and Gaussian-approximation error measurement.
//!
//! Determinism contract: every trial draws from its own counter-based
//! ChaCha substream keyed by (seed, trial index), so results do not depend
//! on evaluation order and identical configs reproduce byte-identical
//! summaries.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comm_model;
use crate::comp_model;
use crate::power_scenario::PowerProblem;
use crate::specfun;
use crate::time_scenario::TimeProblem;

/// Stream indices at and above this offset are reserved for bootstrap
/// resampling so they never collide with trial substreams.
const BOOTSTRAP_STREAM_BASE: u64 = 1 << 40;

/// Bootstrap resample count for quantile standard errors.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_samples: u64,
    pub seed: u64,
    /// Mirror the uniform stream on odd trials (pairwise antithetic).
    pub antithetic: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { n_samples: 100_000, seed: 20240917, antithetic: false }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_samples == 0 {
            return Err("n_samples must be >= 1".into());
        }
        Ok(())
    }
}

/// Per-trial uniform source: substream `index` of the seeded ChaCha
/// generator, optionally mirrored (u → 1−u) for antithetic pairs.
struct TrialStream {
    rng: ChaCha8Rng,
    mirror: bool,
}

impl TrialStream {
    fn new(base: &ChaCha8Rng, index: u64, antithetic: bool) -> Self {
        let (stream, mirror) = if antithetic { (index / 2, index % 2 == 1) } else { (index, false) };
        let mut rng = base.clone();
        rng.set_stream(stream);
        TrialStream { rng, mirror }
    }

    /// Uniform in (0, 1); the zero endpoint is excluded so logs are safe.
    fn next_f64(&mut self) -> f64 {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let u = if self.mirror { 1.0 - u } else { u };
        if u <= 0.0 {
            f64::MIN_POSITIVE
        } else {
            u
        }
    }

    /// Standard normal via the polar method.
    fn next_normal(&mut self) -> f64 {
        loop {
            let v1 = 2.0 * self.next_f64() - 1.0;
            let v2 = 2.0 * self.next_f64() - 1.0;
            let s = v1 * v1 + v2 * v2;
            if s > 0.0 && s < 1.0 {
                return v1 * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Gamma(shape, 1) by Marsaglia–Tsang; shapes below one use the boost
    /// X_{κ+1}·U^{1/κ}.
    fn next_gamma(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            let boost = self.next_f64().powf(1.0 / shape);
            return boost * self.next_gamma(shape + 1.0);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.next_normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.next_f64();
            if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
                return d * v;
            }
        }
    }

    /// Attempts of one persistent-ARQ packet: geometric with success 1−eps.
    fn next_attempts(&mut self, eps: f64) -> u64 {
        let mut k = 1u64;
        while self.next_f64() < eps {
            k += 1;
        }
        k
    }
}

/// Gamma(shape, 1) draw from any RngCore, exposed for test oracles.
pub fn gamma_sample<R: RngCore>(rng: &mut R, shape: f64) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        return u.powf(1.0 / shape) * gamma_sample(rng, shape + 1.0);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = loop {
            let v1: f64 = rng.gen_range(-1.0..1.0);
            let v2: f64 = rng.gen_range(-1.0..1.0);
            let s = v1 * v1 + v2 * v2;
            if s > 0.0 && s < 1.0 {
                break v1 * (-2.0 * s.ln() / s).sqrt();
            }
        };
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d * v;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileEstimate {
    pub rho: f64,
    pub value: f64,
    /// Bootstrap standard error (200 resamples).
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatencySummary {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub quantiles: Vec<QuantileEstimate>,
}

/// Empirical ϱ-quantile: the ⌈ϱn⌉-th order statistic.
fn quantile_of_sorted(sorted: &[f64], rho: f64) -> f64 {
    let n = sorted.len();
    let k = ((rho * n as f64).ceil() as usize).clamp(1, n) - 1;
    sorted[k]
}

fn quantile_select(buf: &mut [f64], rho: f64) -> f64 {
    let n = buf.len();
    let k = ((rho * n as f64).ceil() as usize).clamp(1, n) - 1;
    *buf.select_nth_unstable_by(k, |a, b| a.partial_cmp(b).unwrap()).1
}

fn bootstrap_se(values: &[f64], rho: f64, base: &ChaCha8Rng) -> f64 {
    let n = values.len();
    let mut estimates = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut buf = vec![0.0; n];
    for b in 0..BOOTSTRAP_RESAMPLES {
        let mut rng = base.clone();
        rng.set_stream(BOOTSTRAP_STREAM_BASE + b as u64);
        for slot in buf.iter_mut() {
            *slot = values[rng.gen_range(0..n)];
        }
        estimates.push(quantile_select(&mut buf, rho));
    }
    let m = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let var = estimates.iter().map(|e| (e - m) * (e - m)).sum::<f64>()
        / (estimates.len() - 1) as f64;
    var.sqrt()
}

/// Sample the end-to-end latency (1 + ζ f_c/f_b)·T_c + t_p·Σ attempts with
/// the ceiled packet count, and summarize mean/variance plus the requested
/// quantiles with bootstrap standard errors.
pub fn sample_latency(
    q: f64,
    fc: f64,
    prob: &PowerProblem,
    sim: &SimConfig,
    rhos: &[f64],
) -> LatencySummary {
    let scale = if q > 1.0 {
        comp_model::compression_time_dist(q, fc, &prob.comp).expect("valid (Q, f_c)").scale
    } else {
        0.0
    };
    let dscale = if prob.include_decomp_scale {
        comp_model::decompression_scale(fc, &prob.comp)
    } else {
        1.0
    };
    let n_packets = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
    let t_p = comm_model::packet_time(&prob.chan);
    let eps = prob.chan.eps;
    let base = ChaCha8Rng::seed_from_u64(sim.seed);

    let mut values = Vec::with_capacity(sim.n_samples as usize);
    for trial in 0..sim.n_samples {
        let mut s = TrialStream::new(&base, trial, sim.antithetic);
        let t_c = if scale > 0.0 { s.next_gamma(prob.comp.kappa) * scale } else { 0.0 };
        let mut attempts = 0u64;
        for _ in 0..n_packets {
            attempts += s.next_attempts(eps);
        }
        values.push(dscale * t_c + attempts as f64 * t_p);
    }

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quantiles = rhos
        .iter()
        .map(|&rho| QuantileEstimate {
            rho,
            value: quantile_of_sorted(&sorted, rho),
            std_error: bootstrap_se(&values, rho, &base),
        })
        .collect();
    LatencySummary { n: sim.n_samples, mean, variance, quantiles }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotSummary {
    pub n: u64,
    pub p_succ_hat: f64,
    pub p_succ_se: f64,
    pub mean_energy_hat: f64,
    pub energy_se: f64,
}

/// Simulate the time-constrained slot: draw the compression time against
/// its deadline, then the packet-level coding outcome over N_tx Bernoulli
/// packet deliveries.
///
/// When compression misses the deadline the slot still transmits (garbage
/// payload), so the simulated transmission energy matches the analytic
/// model, which does not condition on ε_c. Set `skip_tx_on_comp_failure`
/// to drop that energy instead.
pub fn simulate_slot(
    alpha: f64,
    q: f64,
    fc: f64,
    prob: &TimeProblem,
    sim: &SimConfig,
    skip_tx_on_comp_failure: bool,
) -> SlotSummary {
    let scale = if q > 1.0 {
        comp_model::compression_time_dist(q, fc, &prob.comp).expect("valid (Q, f_c)").scale
    } else {
        0.0
    };
    let deadline = alpha * prob.t_slot;
    let power = comp_model::cpu_power(fc, &prob.comp);
    let n_needed = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
    let n_tx = crate::time_scenario::tx_count(alpha, prob);
    let e_tx_slot =
        prob.chan.n_p as f64 * n_tx as f64 / comm_model::energy_efficiency(&prob.chan);
    let eps = prob.chan.eps;
    let base = ChaCha8Rng::seed_from_u64(sim.seed);

    let mut successes = 0u64;
    let (mut e_sum, mut e_sum2) = (0.0, 0.0);
    for trial in 0..sim.n_samples {
        let mut s = TrialStream::new(&base, trial, sim.antithetic);
        let (t_c, comp_ok) = if scale > 0.0 {
            let t = s.next_gamma(prob.comp.kappa) * scale;
            (t, t <= deadline)
        } else {
            (0.0, true)
        };
        let e_comp = if scale > 0.0 { power * t_c.min(deadline) } else { 0.0 };
        let mut delivered = 0u64;
        for _ in 0..n_tx {
            if s.next_f64() >= eps {
                delivered += 1;
            }
        }
        if comp_ok && delivered >= n_needed {
            successes += 1;
        }
        let e = if !comp_ok && skip_tx_on_comp_failure { e_comp } else { e_comp + e_tx_slot };
        e_sum += e;
        e_sum2 += e * e;
    }

    let n = sim.n_samples as f64;
    let p = successes as f64 / n;
    let mean_e = e_sum / n;
    let var_e = (e_sum2 / n - mean_e * mean_e).max(0.0);
    SlotSummary {
        n: sim.n_samples,
        p_succ_hat: p,
        p_succ_se: (p * (1.0 - p) / n).sqrt(),
        mean_energy_hat: mean_e,
        energy_se: (var_e / n).sqrt(),
    }
}

/// Sup-norm gap between the exact negative-binomial transmission-time CDF
/// and its Gaussian approximation, over the attempt counts up to the
/// 0.9999 quantile. The eps = 0 case is degenerate (both CDFs are the same
/// unit step on the grid) and reports zero.
pub fn gaussian_approx_error(n_packets: u64, eps: f64, t_p: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    let n = n_packets as f64;
    let mu = n * t_p / (1.0 - eps);
    let sigma = t_p * (eps * n).sqrt() / (1.0 - eps);
    let k_hi = specfun::nbinom_quantile(n_packets, eps, 0.9999);
    let mut worst: f64 = 0.0;
    for k in n_packets..=k_hi {
        let exact = specfun::nbinom_cdf(n_packets, eps, k);
        let approx = specfun::normal_cdf((k as f64 * t_p - mu) / sigma);
        worst = worst.max((exact - approx).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SystemParams;
    use crate::specfun::reg_lower_gamma;
    use crate::time_scenario;

    fn power_problem() -> PowerProblem {
        let p = SystemParams::default();
        PowerProblem {
            comp: p.comp,
            chan: p.chan,
            e_max: 0.1,
            rho: 0.9,
            theta: 1e-4,
            include_decomp_scale: true,
        }
    }

    fn time_problem() -> TimeProblem {
        let p = SystemParams::default();
        TimeProblem {
            comp: p.comp,
            chan: p.chan,
            t_slot: 0.4,
            rho: 0.999,
            theta: 0.01,
            fc_tol: 1e6,
            literal_trunc_arg: false,
        }
    }

    #[test]
    fn gamma_sampler_matches_cdf() {
        // empirical CDF of Marsaglia–Tsang draws vs the analytic CDF
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &shape in &[0.5, 1.25, 4.0] {
            let n = 200_000;
            let mut below = [0u64; 3];
            let probes = [0.5 * shape, shape, 2.0 * shape];
            for _ in 0..n {
                let x = gamma_sample(&mut rng, shape);
                for (i, &p) in probes.iter().enumerate() {
                    if x < p {
                        below[i] += 1;
                    }
                }
            }
            for (i, &p) in probes.iter().enumerate() {
                let expect = reg_lower_gamma(shape, p).unwrap();
                let got = below[i] as f64 / n as f64;
                let se = (expect * (1.0 - expect) / n as f64).sqrt();
                assert!(
                    (got - expect).abs() < 4.0 * se,
                    "shape={shape} probe={p}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let prob = power_problem();
        let sim = SimConfig { n_samples: 5_000, seed: 77, antithetic: false };
        let a = sample_latency(1.2, 1.6e9, &prob, &sim, &[0.9]);
        let b = sample_latency(1.2, 1.6e9, &prob, &sim, &[0.9]);
        assert_eq!(a, b);
        let tp = time_problem();
        let s1 = simulate_slot(0.3, 1.2, 1.6e9, &tp, &sim, false);
        let s2 = simulate_slot(0.3, 1.2, 1.6e9, &tp, &sim, false);
        assert_eq!(s1, s2);
    }

    #[test]
    fn substreams_independent_of_order() {
        // trial i's draw must not depend on whether trials before it ran
        let base = ChaCha8Rng::seed_from_u64(123);
        let mut a = TrialStream::new(&base, 7, false);
        let first = a.next_f64();
        let mut b = TrialStream::new(&base, 3, false);
        let _ = b.next_f64();
        let mut c = TrialStream::new(&base, 7, false);
        assert_eq!(first, c.next_f64());
    }

    #[test]
    fn latency_mean_matches_analytic() {
        let prob = power_problem();
        let sim = SimConfig { n_samples: 200_000, seed: 3131, antithetic: false };
        let (q, fc) = (1.2, 1.6e9);
        let s = sample_latency(q, fc, &prob, &sim, &[0.9]);
        let dist = comp_model::compression_time_dist(q, fc, &prob.comp).unwrap();
        let n = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
        let stats = comm_model::tx_time_stats(n as f64, &prob.chan);
        let dscale = comp_model::decompression_scale(fc, &prob.comp);
        let expect = dscale * dist.mean() + stats.mean;
        let var = dscale * dscale * dist.variance() + stats.variance;
        let se = (var / sim.n_samples as f64).sqrt();
        assert!((s.mean - expect).abs() < 3.0 * se, "mean {} vs {}", s.mean, expect);
    }

    #[test]
    fn latency_deterministic_when_channel_near_perfect() {
        // eps also sets the rate, so a literal eps = 0 degenerates the
        // model; at eps = 1e-12 no retransmission ever triggers
        let mut prob = power_problem();
        prob.chan.eps = 1e-12;
        let sim = SimConfig { n_samples: 200, seed: 5, antithetic: false };
        let s = sample_latency(1.0, prob.comp.fc_min, &prob, &sim, &[0.5]);
        let n = comm_model::num_packets(1.0, prob.comp.d_bits, prob.chan.n_p);
        let expect = n as f64 * comm_model::packet_time(&prob.chan);
        assert!((s.mean - expect).abs() < 1e-12 * expect);
        // identical samples up to summation rounding
        assert!(s.variance < 1e-28 * s.mean * s.mean);
    }

    #[test]
    fn empirical_quantile_below_analytic_bound() {
        let prob = power_problem();
        let sim = SimConfig { n_samples: 100_000, seed: 99, antithetic: false };
        let (q, fc) = (1.2, 1.6e9);
        let s = sample_latency(q, fc, &prob, &sim, &[0.9]);
        let bound = crate::power_scenario::latency_quantile_bound(q, fc, &prob).unwrap();
        let est = &s.quantiles[0];
        assert!(
            bound.total >= est.value - 3.0 * est.std_error,
            "bound {} below empirical {} (se {})",
            bound.total,
            est.value,
            est.std_error
        );
    }

    #[test]
    fn slot_simulation_agrees_with_analytics() {
        let prob = time_problem();
        let sim = SimConfig { n_samples: 100_000, seed: 11, antithetic: false };
        let (alpha, q, fc) = (0.3, 1.2, 1.6e9);
        let s = simulate_slot(alpha, q, fc, &prob, &sim, false);
        let ec = time_scenario::compression_failure(alpha, q, fc, &prob).unwrap();
        let n_needed = comm_model::num_packets(q, prob.comp.d_bits, prob.chan.n_p);
        let etx = time_scenario::tx_failure(n_needed, time_scenario::tx_count(alpha, &prob), prob.chan.eps);
        let p_expect = (1.0 - ec) * (1.0 - etx);
        assert!(
            (s.p_succ_hat - p_expect).abs() < 3.0 * s.p_succ_se.max(1e-6),
            "p_succ {} vs {}",
            s.p_succ_hat,
            p_expect
        );
        let e_expect = time_scenario::comp_energy_time(alpha, q, fc, &prob).unwrap()
            + time_scenario::comm_energy_time(alpha, &prob);
        assert!(
            (s.mean_energy_hat - e_expect).abs() < 3.0 * s.energy_se.max(1e-12),
            "energy {} vs {}",
            s.mean_energy_hat,
            e_expect
        );
    }

    #[test]
    fn slot_trivially_reliable_when_near_perfect() {
        // Q = 1, N_tx comfortably above N, loss probability vanishing
        let mut prob = time_problem();
        prob.chan.eps = 1e-9;
        let t_p = comm_model::packet_time(&prob.chan);
        prob.t_slot = 800.0 * t_p;
        let sim = SimConfig { n_samples: 500, seed: 8, antithetic: false };
        let s = simulate_slot(0.1, 1.0, prob.comp.fc_min, &prob, &sim, false);
        assert_eq!(s.p_succ_hat, 1.0);
    }

    #[test]
    fn skip_tx_flag_reduces_energy() {
        let mut prob = time_problem();
        // deliberately starve compression so failures happen
        prob.t_slot = 0.4;
        let sim = SimConfig { n_samples: 20_000, seed: 21, antithetic: false };
        let (alpha, q, fc) = (0.02, 1.5, 0.8e9);
        let keep = simulate_slot(alpha, q, fc, &prob, &sim, false);
        let skip = simulate_slot(alpha, q, fc, &prob, &sim, true);
        assert!(skip.mean_energy_hat < keep.mean_energy_hat);
    }

    #[test]
    fn antithetic_mode_unbiased() {
        let prob = power_problem();
        let plain = SimConfig { n_samples: 100_000, seed: 300, antithetic: false };
        let anti = SimConfig { n_samples: 100_000, seed: 300, antithetic: true };
        let a = sample_latency(1.2, 1.6e9, &prob, &plain, &[]);
        let b = sample_latency(1.2, 1.6e9, &prob, &anti, &[]);
        let se = (a.variance / plain.n_samples as f64).sqrt();
        assert!((a.mean - b.mean).abs() < 4.0 * se);
    }

    #[test]
    fn gaussian_error_cases() {
        let t_p = 6.7e-4;
        assert_eq!(gaussian_approx_error(10, 0.0, t_p), 0.0);
        let d = gaussian_approx_error(500, 0.1, t_p);
        assert!(d > 0.0 && d < 0.5);
    }

    #[test]
    fn truncated_mean_mc_agreement() {
        // conditional-mean Monte Carlo for the truncated Gamma
        let prob = time_problem();
        let (alpha, q, fc) = (0.35, 1.2, 1.6e9);
        let analytic = time_scenario::truncated_comp_mean(alpha, q, fc, &prob).unwrap();
        let scale = comp_model::compression_time_dist(q, fc, &prob.comp).unwrap().scale;
        let deadline = alpha * prob.t_slot;
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let (mut sum, mut sum2, mut kept) = (0.0, 0.0, 0u64);
        for _ in 0..1_000_000 {
            let t = gamma_sample(&mut rng, prob.comp.kappa) * scale;
            if t < deadline {
                sum += t;
                sum2 += t * t;
                kept += 1;
            }
        }
        let mean = sum / kept as f64;
        let var = sum2 / kept as f64 - mean * mean;
        let se = (var / kept as f64).sqrt();
        assert!(
            (analytic - mean).abs() < 3.0 * se,
            "analytic {analytic} vs MC {mean} (se {se})"
        );
    }
}
