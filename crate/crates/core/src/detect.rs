//! From spectra to decisions: the LRT linear statistic, CLT-calibrated
//! thresholds and error probabilities, and the ring-law counting statistics.

use crate::clt::{f_lrt, q_function, q_inverse, CltParams};
use crate::error::{Error, Result};
use crate::laws::{ring_inner_radius, RingLawParams};
use crate::rmt::ComplexSpectrum;

/// Binary sensing outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    SignalPresent,
    NoiseOnly,
}

/// How thresholds are formed from the null law. The source derivation
/// prints mean + (1/sd)·Q⁻¹(ε), which breaks the P_fa(γ) = ε round trip;
/// reports carry this string so the convention in force is explicit.
pub const THRESHOLD_RULE: &str = "mean + sd * q_inverse(epsilon)";

/// Everything a detection run reports. Serializes to a flat JSON object.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DetectionReport {
    /// The observed statistic (L, or L_D for a distributed round).
    pub statistic: f64,
    /// Decision threshold gamma.
    pub threshold: f64,
    pub decision: Decision,
    /// Target false-alarm rate the threshold was chosen for.
    pub epsilon: f64,
    /// Q((gamma - m0)/s0); equals epsilon by construction.
    pub predicted_pfa: f64,
    /// Q((gamma - m1)/s1) when an alternative model was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_pd: Option<f64>,
    /// The threshold convention in force (see [`THRESHOLD_RULE`]).
    pub threshold_rule: String,
}

/// Ring-law counting statistics of one spectrum.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct RingStats {
    /// Smallest eigenvalue modulus (the quantile-0 inner-radius estimate).
    pub inner_estimate: f64,
    /// Number of eigenvalues strictly inside the theoretical inner circle.
    pub inside_count: usize,
    pub total: usize,
}

/// The LRT linear statistic L = Σᵢ f_L(λᵢ/p) over the eigenvalues of n·Sₙ.
///
/// Algebraically this equals Tr(Sₙ) − ln det(Sₙ) − p; a non-positive
/// eigenvalue means Sₙ was rank-deficient (n < p) and is a domain error.
pub fn lrt_statistic(eigs: &[f64], p: usize, c: f64) -> Result<f64> {
    if eigs.len() != p {
        return Err(Error::invalid_argument(format!(
            "expected {p} eigenvalues, got {}",
            eigs.len()
        )));
    }
    let mut acc = 0.0;
    for &lam in eigs {
        if lam <= 0.0 {
            return Err(Error::domain(format!(
                "non-positive eigenvalue {lam}: sample covariance is rank-deficient"
            )));
        }
        acc += f_lrt(lam / p as f64, c)?;
    }
    Ok(acc)
}

/// Threshold γ = m₀ + s₀·Q⁻¹(ε) for a target false-alarm rate ε, where m₀ and
/// s₀ are the mean and standard deviation of the statistic under the supplied
/// null parameters at dimension p.
///
/// The source derivation prints γ = μ + (1/σ)Q⁻¹(ε); that form fails the
/// round-trip identity P_fa(γ) = ε unless σ = 1, so the standard Gaussian
/// quantile form with multiplicative σ is used.
pub fn threshold(params_h0: &CltParams, p: usize, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "false-alarm target must be in (0, 1), got {epsilon}"
        )));
    }
    Ok(params_h0.mean(p) + params_h0.sd() * q_inverse(epsilon)?)
}

/// False-alarm and (when alternative parameters are given) detection
/// probabilities of the threshold `gamma`:
/// pfa = Q((γ − m₀)/s₀), pd = Q((γ − m₁)/s₁).
pub fn error_probabilities(
    gamma: f64,
    params_h0: &CltParams,
    params_h1: Option<&CltParams>,
    p: usize,
) -> Result<(f64, Option<f64>)> {
    if params_h0.sigma2 <= 0.0 {
        return Err(Error::domain("null variance must be positive"));
    }
    let pfa = q_function((gamma - params_h0.mean(p)) / params_h0.sd());
    let pd = match params_h1 {
        Some(h1) => {
            if h1.sigma2 <= 0.0 {
                return Err(Error::domain("alternative variance must be positive"));
            }
            Some(q_function((gamma - h1.mean(p)) / h1.sd()))
        }
        None => None,
    };
    Ok((pfa, pd))
}

/// Signal is declared present iff the statistic strictly exceeds the
/// threshold; a tie is read as noise (conservative).
pub fn decide(statistic: f64, gamma: f64) -> Decision {
    if statistic > gamma {
        Decision::SignalPresent
    } else {
        Decision::NoiseOnly
    }
}

/// Quantile-based estimate of the inner ring radius: the `quantile`-th
/// smallest eigenvalue modulus (quantile 0 is the minimum).
///
/// The minimum modulus is noise-dominated at finite N; the default 0.02 used
/// by the trackers keeps the estimate robust to stray eigenvalues.
pub fn inner_radius_estimate(spec: &ComplexSpectrum, quantile: f64) -> Result<f64> {
    if spec.values().is_empty() {
        return Err(Error::invalid_argument("empty spectrum"));
    }
    if !(0.0..0.5).contains(&quantile) {
        return Err(Error::invalid_argument(format!(
            "quantile must be in [0, 0.5), got {quantile}"
        )));
    }
    let mut moduli = spec.moduli();
    moduli.sort_by(|a, b| a.partial_cmp(b).expect("finite moduli"));
    let idx = ((quantile * moduli.len() as f64) as usize).min(moduli.len() - 1);
    Ok(moduli[idx])
}

/// Counts eigenvalues strictly inside the theoretical inner circle and
/// records the minimum-modulus estimate alongside.
pub fn inside_ring_count(spec: &ComplexSpectrum, params: RingLawParams) -> Result<RingStats> {
    let r_inner = ring_inner_radius(params);
    let moduli = spec.moduli();
    let inside = moduli.iter().filter(|&&m| m < r_inner).count();
    Ok(RingStats {
        inner_estimate: inner_radius_estimate(spec, 0.0)?,
        inside_count: inside,
        total: moduli.len(),
    })
}

/// Shrink ratio ρ(L) = M_noise / M_signal of inside-ring counts.
pub fn shrink_ratio(noise: &RingStats, signal: &RingStats) -> Result<f64> {
    if signal.inside_count == 0 {
        return Err(Error::UndefinedRatio(
            "signal-present count inside the ring is zero".into(),
        ));
    }
    Ok(noise.inside_count as f64 / signal.inside_count as f64)
}

/// Assembles a [`DetectionReport`] from a statistic and calibrated models.
pub fn report(
    statistic: f64,
    params_h0: &CltParams,
    params_h1: Option<&CltParams>,
    p: usize,
    epsilon: f64,
) -> Result<DetectionReport> {
    let gamma = threshold(params_h0, p, epsilon)?;
    let (pfa, pd) = error_probabilities(gamma, params_h0, params_h1, p)?;
    Ok(DetectionReport {
        statistic,
        threshold: gamma,
        decision: decide(statistic, gamma),
        epsilon,
        predicted_pfa: pfa,
        predicted_pd: pd,
        threshold_rule: THRESHOLD_RULE.to_string(),
    })
}
