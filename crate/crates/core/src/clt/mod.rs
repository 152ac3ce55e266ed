//! Central limit theorem of linear spectral statistics for spiked sample
//! covariance matrices.
//!
//! Setting: columns of a p×n data matrix are complex Gaussian with covariance
//! either I (null) or I plus a few rank-one spikes of strengths δ_ℓ
//! (alternative). With n/p → c ≥ 1, a linear statistic Σ_i f(λ_i/p) over the
//! eigenvalues of n·S_n is asymptotically Gaussian; this module computes its
//! mean, variance and per-spike mean shifts, both in closed form for the
//! likelihood-ratio function and by quadrature for arbitrary analytic f.
//!
//! Convention note: this module fixes c = n/p ≥ 1. The snapshot pipelines use
//! the other ratio (N/T ≤ 1); the two never share a symbol.

mod gauss;
mod quadrature;

pub use gauss::{q_function, q_inverse};
pub use quadrature::clt_quadrature;

use crate::error::{Error, Result};
use crate::laws::mp_edges;

/// Descending spike strengths δ₁ > … > δ_r > 0; empty means the null
/// hypothesis.
#[derive(Debug, Clone, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct SpikeModel {
    deltas: Vec<f64>,
}

impl SpikeModel {
    /// The null model: no spikes.
    pub fn none() -> Self {
        Self::default()
    }

    /// Validates strict descent and positivity.
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        for w in deltas.windows(2) {
            if !(w[0] > w[1]) {
                return Err(Error::invalid_argument(format!(
                    "spike strengths must be strictly descending, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if deltas.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::invalid_argument("spike strengths must be positive"));
        }
        Ok(Self { deltas })
    }

    pub fn single(delta: f64) -> Result<Self> {
        Self::new(vec![delta])
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn rank(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_null(&self) -> bool {
        self.deltas.is_empty()
    }
}

/// Gaussian law of the linear statistic: Σf(λᵢ/p) ≈ N(p·mu + Σ mu_bar, sigma2).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CltParams {
    /// Ratio convention c = n/p ≥ 1.
    pub c: f64,
    /// Bulk mean per dimension.
    pub mu: f64,
    /// Variance of the statistic (spike-independent).
    pub sigma2: f64,
    /// Per-spike mean shifts, one per δ_ℓ.
    pub mu_bar: Vec<f64>,
    /// Support edges a = (1−√c)², b = (1+√c)².
    pub a: f64,
    pub b: f64,
}

impl CltParams {
    /// Mean of the statistic at dimension p: p·mu plus all spike shifts.
    pub fn mean(&self, p: usize) -> f64 {
        p as f64 * self.mu + self.mu_bar.iter().sum::<f64>()
    }

    /// Standard deviation of the statistic.
    pub fn sd(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

/// An analytic test function with its derivative, defined on
/// (domain_min, ∞).
pub struct AnalyticFn {
    f: Box<dyn Fn(f64) -> f64 + Sync>,
    df: Box<dyn Fn(f64) -> f64 + Sync>,
    /// Values at or below this are outside the function's domain; the
    /// quadrature refuses supports that touch it.
    domain_min: f64,
}

impl AnalyticFn {
    pub fn new(
        f: impl Fn(f64) -> f64 + Sync + 'static,
        df: impl Fn(f64) -> f64 + Sync + 'static,
        domain_min: f64,
    ) -> Self {
        Self {
            f: Box::new(f),
            df: Box::new(df),
            domain_min,
        }
    }

    /// The likelihood-ratio function x/c − ln(x/c) − 1 (singular at 0).
    pub fn lrt(c: f64) -> Result<Self> {
        if c <= 1.0 {
            return Err(Error::domain(format!(
                "the LRT function needs c > 1 so the support stays positive, got {c}"
            )));
        }
        Ok(Self::new(
            move |x| x / c - (x / c).ln() - 1.0,
            move |x| 1.0 / c - 1.0 / x,
            0.0,
        ))
    }

    /// Constant function κ (derivative zero, whole real line).
    pub fn constant(kappa: f64) -> Self {
        Self::new(move |_| kappa, |_| 0.0, f64::NEG_INFINITY)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        (self.df)(x)
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }
}

/// The LRT test function f_L(x) = x/c − ln(x/c) − 1; nonnegative, zero
/// exactly at x = c.
pub fn f_lrt(x: f64, c: f64) -> Result<f64> {
    if c <= 1.0 {
        return Err(Error::domain(format!("f_lrt needs c > 1, got {c}")));
    }
    if x <= 0.0 {
        return Err(Error::domain(format!("f_lrt needs x > 0, got {x}")));
    }
    let t = x / c;
    Ok(t - t.ln() - 1.0)
}

/// Location of the eigenvalue an isolated spike δ creates (for the spectrum
/// scaled as λ/p): z₀ = (1 + cδ)(1 + δ)/δ. Exceeds the bulk edge b exactly
/// when δ > 1/√c.
pub fn z0_of_spike(delta: f64, c: f64) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::domain(format!(
            "spike strength must be positive, got {delta}"
        )));
    }
    if c < 1.0 {
        return Err(Error::domain(format!("z0_of_spike needs c >= 1, got {c}")));
    }
    Ok((1.0 + c * delta) * (1.0 + delta) / delta)
}

/// Exact CLT parameters for the LRT statistic.
///
/// For complex Gaussian data:
///   mu     = 1 + (c−1)·ln(1 − 1/c),
///   sigma2 = −ln(1 − 1/c) − 1/c,
///   mu_bar = δ − ln(1 + δ) per spike.
///
/// The variance printed alongside the closed forms in the source derivation,
/// −(1/c)·ln(1 − 1/c), does not satisfy the defining double integral; the
/// value used here does, and Monte Carlo agrees (see the oracle tests and the
/// acceptance suite).
///
/// Only r ≤ 1 spikes are served here: multi-spike alternatives go through
/// [`clt_quadrature`], which sums per-spike shifts.
pub fn lrt_clt_closed(c: f64, spikes: &SpikeModel) -> Result<CltParams> {
    if c <= 1.0 {
        return Err(Error::domain(format!(
            "lrt_clt_closed needs c > 1, got {c}"
        )));
    }
    if spikes.rank() > 1 {
        return Err(Error::UnsupportedClosedForm(format!(
            "closed form covers at most one spike, got {}; use clt_quadrature",
            spikes.rank()
        )));
    }
    let log1m = (1.0 - 1.0 / c).ln();
    let (a, b) = mp_edges(c);
    Ok(CltParams {
        c,
        mu: 1.0 + (c - 1.0) * log1m,
        sigma2: -log1m - 1.0 / c,
        mu_bar: spikes
            .deltas()
            .iter()
            .map(|&d| d - (1.0 + d).ln())
            .collect(),
        a,
        b,
    })
}
