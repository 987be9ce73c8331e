//! Computation-side physics: compression complexity, compression-time
//! distribution, CPU power, compression energy, decompression scaling.

use std::fmt;

use crate::specfun::{self, SpecFunError};

/// Parameters of the device's compression stage.
///
/// `ps_max` and `f_b` have no published reference values; the shipped
/// defaults are recorded in every output header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionParams {
    /// Data-block size in bits.
    pub d_bits: f64,
    /// Gamma shape of the cycles-per-bit complexity.
    pub kappa: f64,
    /// Algorithm constant in the exponential complexity law.
    pub psi: f64,
    /// Decompression cycle count as a fraction of compression's.
    pub zeta: f64,
    /// CPU-cycle frequency bounds, Hz.
    pub fc_min: f64,
    pub fc_max: f64,
    /// Maximum processing power at the sensor, W.
    pub ps_max: f64,
    /// Base-station CPU frequency, Hz.
    pub f_b: f64,
    /// Maximum lossless compression ratio.
    pub q_max: f64,
}

impl CompressionParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let c = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(ModelError::InvalidParam(what.to_string()))
            }
        };
        c(self.d_bits > 0.0, "d_bits must be > 0")?;
        c(self.kappa > 0.0, "kappa must be > 0")?;
        c(self.psi > 0.0, "psi must be > 0")?;
        c(self.zeta > 0.0 && self.zeta <= 1.0, "zeta must be in (0, 1]")?;
        c(self.fc_min > 0.0 && self.fc_min < self.fc_max, "need 0 < fc_min < fc_max")?;
        c(self.ps_max > 0.0, "ps_max must be > 0")?;
        c(self.f_b > 0.0, "f_b must be > 0")?;
        c(self.q_max > 1.0, "q_max must be > 1")?;
        Ok(())
    }
}

/// Shape/scale pair for a Gamma-distributed time, with `scale == 0`
/// standing in for the degenerate zero-time distribution at Q = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDist {
    pub shape: f64,
    pub scale: f64,
}

impl GammaDist {
    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }

    /// CDF at t; the degenerate distribution is a unit step at zero.
    pub fn cdf(&self, t: f64) -> Result<f64, SpecFunError> {
        if self.scale == 0.0 {
            return Ok(if t >= 0.0 { 1.0 } else { 0.0 });
        }
        if t <= 0.0 {
            return Ok(0.0);
        }
        specfun::reg_lower_gamma(self.shape, t / self.scale)
    }

    pub fn quantile(&self, rho: f64) -> Result<f64, SpecFunError> {
        if self.scale == 0.0 {
            return Ok(0.0);
        }
        specfun::gamma_quantile(self.shape, self.scale, rho)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    InvalidParam(String),
    /// Q or f_c outside its admissible interval.
    OutOfRange { what: &'static str, value: f64, lo: f64, hi: f64 },
    SpecFun(SpecFunError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            ModelError::OutOfRange { what, value, lo, hi } => {
                write!(f, "{what} = {value} outside [{lo}, {hi}]")
            }
            ModelError::SpecFun(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ModelError {}

impl From<SpecFunError> for ModelError {
    fn from(e: SpecFunError) -> Self {
        ModelError::SpecFun(e)
    }
}

fn check_q(q: f64, p: &CompressionParams) -> Result<(), ModelError> {
    if q >= 1.0 && q <= p.q_max {
        Ok(())
    } else {
        Err(ModelError::OutOfRange { what: "Q", value: q, lo: 1.0, hi: p.q_max })
    }
}

fn check_fc(fc: f64, p: &CompressionParams) -> Result<(), ModelError> {
    if fc >= p.fc_min && fc <= p.fc_max {
        Ok(())
    } else {
        Err(ModelError::OutOfRange { what: "f_c", value: fc, lo: p.fc_min, hi: p.fc_max })
    }
}

/// Mean cycles-per-bit complexity e^{ψQ} − e^{ψ}; zero at Q = 1, strictly
/// increasing and convex in Q.
pub fn mean_complexity(q: f64, p: &CompressionParams) -> Result<f64, ModelError> {
    check_q(q, p)?;
    Ok((p.psi * q).exp() - p.psi.exp())
}

/// Distribution of the compression time T_c at ratio Q and clock f_c:
/// Gamma(κ, E[X_c]·D/(κ f_c)). Q = 1 yields the degenerate zero time.
pub fn compression_time_dist(q: f64, fc: f64, p: &CompressionParams) -> Result<GammaDist, ModelError> {
    check_q(q, p)?;
    check_fc(fc, p)?;
    let mc = mean_complexity(q, p)?;
    Ok(GammaDist { shape: p.kappa, scale: mc * p.d_bits / (p.kappa * fc) })
}

/// Cubic power law P_{s,max} (f_c / f_{c,max})³.
pub fn cpu_power(fc: f64, p: &CompressionParams) -> f64 {
    let r = fc / p.fc_max;
    p.ps_max * r * r * r
}

/// Average compression energy P_c(f_c)·E[T_c] = P_{s,max}·E[X_c]·D·f_c²/f_{c,max}³.
pub fn compression_energy(fc: f64, q: f64, p: &CompressionParams) -> Result<f64, ModelError> {
    check_q(q, p)?;
    check_fc(fc, p)?;
    let mc = mean_complexity(q, p)?;
    Ok(p.ps_max * mc * p.d_bits * fc * fc / (p.fc_max * p.fc_max * p.fc_max))
}

/// Multiplier (1 + ζ f_c / f_b) applied to T_c by the decompression stage
/// in the end-to-end latency.
pub fn decompression_scale(fc: f64, p: &CompressionParams) -> f64 {
    1.0 + p.zeta * fc / p.f_b
}
