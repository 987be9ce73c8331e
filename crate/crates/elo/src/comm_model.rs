//! Channel-side physics: average SNR, outage threshold, Shannon outage
//! rate, packet timing, energy efficiency, and transmission-time moments
//! under persistent ARQ.

use crate::comp_model::ModelError;

/// Channel and radio-hardware parameters. All values are SI; dB/dBm
/// conversions happen once at config parse time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Transmit power, W.
    pub p_tx: f64,
    /// Bandwidth, Hz.
    pub bandwidth: f64,
    /// Sensor–BS distance, m.
    pub distance: f64,
    /// Path-loss exponent ℓ.
    pub path_loss_exp: f64,
    /// Noise power spectral density, W/Hz.
    pub n0: f64,
    /// Friis equation parameter (linear).
    pub k0: f64,
    /// ADC coefficient ν, J.
    pub nu: f64,
    /// Coding coefficient λ, J/bit.
    pub lambda_coef: f64,
    /// Target outage probability ε.
    pub eps: f64,
    /// Packet size, bits.
    pub n_p: u64,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let c = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(ModelError::InvalidParam(what.to_string()))
            }
        };
        c(self.p_tx > 0.0, "p_tx must be > 0")?;
        c(self.bandwidth > 0.0, "bandwidth must be > 0")?;
        c(self.distance > 0.0, "distance must be > 0")?;
        c(self.path_loss_exp > 0.0, "path_loss_exp must be > 0")?;
        c(self.n0 > 0.0, "n0 must be > 0")?;
        c(self.k0 > 0.0, "k0 must be > 0")?;
        c(self.nu > 0.0, "nu must be > 0")?;
        c(self.lambda_coef > 0.0, "lambda_coef must be > 0")?;
        c(self.eps > 0.0 && self.eps < 1.0, "eps must be in (0, 1)")?;
        c(self.n_p >= 1, "n_p must be a positive integer")?;
        Ok(())
    }
}

/// Mean and variance of the total transmission time for N packets under
/// persistent ARQ (N negative-binomial attempts scaled by t_p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxTimeStats {
    pub n_packets: f64,
    pub t_p: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Average SNR γ₀ = K₀ P_tx / (d^ℓ N₀ B).
pub fn avg_snr(c: &ChannelParams) -> f64 {
    c.k0 * c.p_tx / (c.distance.powf(c.path_loss_exp) * c.n0 * c.bandwidth)
}

/// Decoding threshold γ_th = −γ₀ ln(1−ε); the induced outage equals ε
/// exactly under an Exp(1) channel gain.
pub fn snr_threshold(c: &ChannelParams) -> f64 {
    -avg_snr(c) * (1.0 - c.eps).ln()
}

/// Shannon outage rate R(ε) = B log₂(1 + γ_th), bit/s.
pub fn outage_rate(c: &ChannelParams) -> f64 {
    c.bandwidth * (1.0 + snr_threshold(c)).log2()
}

/// Time to transmit one packet of n_p bits, t_p = n_p / R(ε).
pub fn packet_time(c: &ChannelParams) -> f64 {
    c.n_p as f64 / outage_rate(c)
}

/// Energy efficiency η(ε) = R / (P_tx + νB + λR), bit/J.
pub fn energy_efficiency(c: &ChannelParams) -> f64 {
    let r = outage_rate(c);
    r / (c.p_tx + c.nu * c.bandwidth + c.lambda_coef * r)
}

/// Packet count ⌈D/(Q n_p)⌉ for a block of `d_bits`.
pub fn num_packets(q: f64, d_bits: f64, n_p: u64) -> u64 {
    (d_bits / (q * n_p as f64)).ceil() as u64
}

/// Real-valued packet count D/(Q n_p), used inside the power-scenario
/// optimizer where the ceiling is dropped for tractability.
pub fn num_packets_continuous(q: f64, d_bits: f64, n_p: u64) -> f64 {
    d_bits / (q * n_p as f64)
}

/// Moments of the ARQ transmission time for `n` packets:
/// mean N t_p/(1−ε), variance N t_p² ε/(1−ε)².
pub fn tx_time_stats(n: f64, c: &ChannelParams) -> TxTimeStats {
    let t_p = packet_time(c);
    let fail = 1.0 - c.eps;
    TxTimeStats {
        n_packets: n,
        t_p,
        mean: n * t_p / fail,
        variance: n * t_p * t_p * c.eps / (fail * fail),
    }
}

/// Mean communication energy for `n` packets under persistent ARQ:
/// E_tx = n_p·n / ((1−ε)·η). Accepts a real-valued n so the continuous
/// form D/((1−ε) Q η) is the exact image of `num_packets_continuous`.
pub fn comm_energy(n: f64, c: &ChannelParams) -> f64 {
    c.n_p as f64 * n / ((1.0 - c.eps) * energy_efficiency(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::SystemParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chan() -> ChannelParams {
        SystemParams::default().chan
    }

    /// Table-1 reading with the printed noise density and the top of the
    /// transmit-power range; used for the formula-evaluation examples.
    fn chan_table1() -> ChannelParams {
        ChannelParams {
            p_tx: 1.5,
            n0: 1e-14,
            ..chan()
        }
    }

    #[test]
    fn avg_snr_examples() {
        let c = chan_table1();
        let g0 = avg_snr(&c);
        assert!((g0 - 0.0029928934724533186).abs() < 1e-15);
        // linear in P_tx
        let mut c2 = c;
        c2.p_tx *= 2.0;
        assert!((avg_snr(&c2) / g0 - 2.0).abs() < 1e-12);
        // inverse-square in distance at ell = 2
        let mut c3 = c;
        c3.distance *= 2.0;
        assert!((avg_snr(&c3) / g0 - 0.25).abs() < 1e-12);
    }

    #[test]
    fn snr_threshold_examples() {
        let mut c = chan();
        c.eps = 1.0 - (-1.0f64).exp();
        assert!((snr_threshold(&c) - avg_snr(&c)).abs() < 1e-12 * avg_snr(&c));
        c.eps = 0.001;
        let expect = avg_snr(&c) * 1.000500333583534e-3;
        assert!((snr_threshold(&c) - expect).abs() < 1e-12 * expect);
        c.eps = 1e-12;
        assert!(snr_threshold(&c) < 1e-11 * avg_snr(&c));
    }

    #[test]
    fn outage_rate_and_packet_time() {
        let c = chan();
        // gamma_th = 1 → R = B; gamma_th = 3 → R = 2B (synthetic n0 pick)
        let mut c1 = c;
        c1.n0 = c.k0 * c.p_tx / (c.distance.powi(2) * c.bandwidth) * (-(1.0 - c.eps).ln());
        assert!((outage_rate(&c1) - c.bandwidth).abs() < 1e-3);
        // gamma_th = 3 → R = 2B
        let mut c3 = c1;
        c3.n0 /= 3.0;
        assert!((outage_rate(&c3) - 2.0 * c.bandwidth).abs() < 1e-3);
        // small-threshold expansion R ≈ B γ_th / ln 2 as a sanity bound
        let mut c2 = c;
        c2.p_tx = 1e-6;
        let r = outage_rate(&c2);
        let approx = c2.bandwidth * snr_threshold(&c2) / std::f64::consts::LN_2;
        assert!((r - approx).abs() < 1e-3 * approx);
        // n_p doubling doubles t_p
        let mut c3 = c;
        c3.n_p *= 2;
        assert!((packet_time(&c3) / packet_time(&c) - 2.0).abs() < 1e-12);
        // default operating point, frozen
        assert!((packet_time(&c) - 0.0006711959067351574).abs() < 1e-16);
        assert!((outage_rate(&c) - 1489877.9774510502).abs() < 1e-6);
    }

    #[test]
    fn energy_efficiency_examples() {
        let c = chan();
        assert!((energy_efficiency(&c) - 5730277.840906902).abs() < 1e-5);
        // ν = λ = 0 limit → R / P_tx
        let mut c0 = c;
        c0.nu = 1e-300;
        c0.lambda_coef = 1e-300;
        let r = outage_rate(&c0);
        assert!((energy_efficiency(&c0) - r / c0.p_tx).abs() < 1e-6);
        // large λ kills the efficiency
        let mut cl = c;
        cl.lambda_coef = 1e6;
        assert!(energy_efficiency(&cl) < 1e-5);
    }

    #[test]
    fn num_packets_examples() {
        assert_eq!(num_packets(1.0, 5e5, 1000), 500);
        assert_eq!(num_packets(1.0, 1001.0, 1000), 2);
        assert!((num_packets_continuous(1.0, 1001.0, 1000) - 1.001).abs() < 1e-15);
    }

    #[test]
    fn tx_time_stats_examples() {
        let mut c = chan();
        c.eps = 0.5;
        let t_p = packet_time(&c);
        let s = tx_time_stats(2.0, &c);
        assert!((s.mean - 4.0 * t_p).abs() < 1e-12 * s.mean);
        assert!((s.variance - 4.0 * t_p * t_p).abs() < 1e-12 * s.variance);
        // eps → 0 limit: mean → N t_p and variance/(N t_p²) → eps. The
        // same eps also sets the rate, so t_p is re-evaluated per eps.
        let mut c0 = chan();
        c0.eps = 1e-9;
        let t_p0 = packet_time(&c0);
        let s0 = tx_time_stats(10.0, &c0);
        assert!((s0.mean - 10.0 * t_p0).abs() < 1e-8 * s0.mean);
        assert!((s0.variance / (10.0 * t_p0 * t_p0) - c0.eps).abs() < 1e-12);
    }

    #[test]
    fn tx_time_stats_match_simulation() {
        let mut c = chan();
        c.eps = 0.1;
        let n_pkts = 7u64;
        let stats = tx_time_stats(n_pkts as f64, &c);
        let t_p = stats.t_p;
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let trials = 1_000_000usize;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..trials {
            let mut attempts = 0u64;
            for _ in 0..n_pkts {
                attempts += 1;
                while rng.gen::<f64>() < c.eps {
                    attempts += 1;
                }
            }
            let t = attempts as f64 * t_p;
            sum += t;
            sum2 += t * t;
        }
        let mean = sum / trials as f64;
        let var = sum2 / trials as f64 - mean * mean;
        let se_mean = (stats.variance / trials as f64).sqrt();
        assert!((mean - stats.mean).abs() < 3.0 * se_mean);
        // loose 3-SE band for the variance of a sum of geometrics
        let se_var = stats.variance * (30.0 / trials as f64).sqrt();
        assert!((var - stats.variance).abs() < 3.0 * se_var);
    }

    #[test]
    fn outage_frequency_matches_eps() {
        let c = chan();
        let ratio = snr_threshold(&c) / avg_snr(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 1_000_000usize;
        let mut outages = 0usize;
        for _ in 0..n {
            // Exp(1) channel gain
            let g = -(1.0 - rng.gen::<f64>()).ln();
            if g < ratio {
                outages += 1;
            }
        }
        let freq = outages as f64 / n as f64;
        let se = (c.eps * (1.0 - c.eps) / n as f64).sqrt();
        assert!((freq - c.eps).abs() < 3.0 * se, "freq {freq} vs eps {}", c.eps);
    }

    #[test]
    fn comm_energy_identity_and_scaling() {
        let c = chan();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let n: f64 = rng.gen_range(1.0..1000.0);
            let e = comm_energy(n, &c);
            let back = e * energy_efficiency(&c) * (1.0 - c.eps);
            assert!((back - n * c.n_p as f64).abs() <= 1e-9 * back);
        }
        // doubling Q halves the continuous-N energy
        let e1 = comm_energy(num_packets_continuous(1.1, 5e5, c.n_p), &c);
        let e2 = comm_energy(num_packets_continuous(2.2, 5e5, c.n_p), &c);
        assert!((e1 / e2 - 2.0).abs() < 1e-12);
        // Q = 1 continuous reduces to D/((1−ε)η)
        let e = comm_energy(num_packets_continuous(1.0, 5e5, c.n_p), &c);
        let direct = 5e5 / ((1.0 - c.eps) * energy_efficiency(&c));
        assert!((e - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn gaussian_approx_error_decreases_with_n() {
        let c = chan();
        let t_p = packet_time(&c);
        let d_small = crate::montecarlo::gaussian_approx_error(50, 0.1, t_p);
        let d_large = crate::montecarlo::gaussian_approx_error(500, 0.1, t_p);
        assert!(
            d_large < d_small,
            "CLT trend violated: dev(500)={d_large} !< dev(50)={d_small}"
        );
    }
}
