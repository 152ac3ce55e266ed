//! Synthetic signal generators.

use crate::error::{Error, Result};
use crate::rmt::rng::{complex_gaussian_mat, rng_for};
use crate::rmt::SnapshotMatrix;
use crate::clt::SpikeModel;
use crate::C64;
use faer::Mat;
use rand::Rng;
use rand_distr::StandardNormal;

/// Auto-regressive series y(n) = (1+r)·x(n) + r·y(n−1) driven by standard
/// Gaussian white noise x, initialized with y(0) = (1+r)·x(0).
///
/// A burn-in of 10·⌈1/(1−|r|)⌉ samples is generated and discarded so the
/// returned series is approximately stationary. The output is the raw filter
/// output: its variance is (1+r)²/(1−r²) times the input's.
pub fn gen_ar_signal(r: f64, length: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = rng_for(seed, 0);
    gen_ar_with(r, length, &mut rng)
}

pub(crate) fn gen_ar_with<R: Rng + ?Sized>(
    r: f64,
    length: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if r.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "AR coefficient r = {r} gives an unstable filter (|r| must be < 1)"
        )));
    }
    if length == 0 {
        return Err(Error::invalid_argument("AR series length must be >= 1"));
    }
    let burn_in = 10 * (1.0 / (1.0 - r.abs())).ceil() as usize;
    let gain = 1.0 + r;
    let x0: f64 = rng.sample(StandardNormal);
    let mut y = gain * x0;
    for _ in 1..burn_in {
        let x: f64 = rng.sample(StandardNormal);
        y = gain * x + r * y;
    }
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        let x: f64 = rng.sample(StandardNormal);
        y = gain * x + r * y;
        out.push(y);
    }
    Ok(out)
}

/// Stationary variance of the AR output for unit-variance input,
/// (1+r)²/(1−r²).
pub(crate) fn ar_stationary_variance(r: f64) -> f64 {
    (1.0 + r) * (1.0 + r) / (1.0 - r * r)
}

/// p×n matrix whose columns are i.i.d. complex Gaussian with covariance
/// Σ = I + Σ_ℓ δ_ℓ·u_ℓu_ℓᴴ, where {u_ℓ} is a seeded random orthonormal set.
/// An empty spike model gives the null Σ = I.
pub fn gen_spiked_samples(
    p: usize,
    n: usize,
    spikes: &SpikeModel,
    seed: u64,
) -> Result<SnapshotMatrix> {
    gen_spiked_with_streams(p, n, spikes, seed, 0, 1)
}

/// [`gen_spiked_samples`] with caller-chosen RNG streams, so acquisition
/// models can share spike directions across snapshots while redrawing data.
pub(crate) fn gen_spiked_with_streams(
    p: usize,
    n: usize,
    spikes: &SpikeModel,
    seed: u64,
    dir_stream: u64,
    data_stream: u64,
) -> Result<SnapshotMatrix> {
    if p == 0 || n == 0 {
        return Err(Error::invalid_argument("dimensions must be positive"));
    }
    let r = spikes.rank();
    if r >= p && r > 0 {
        return Err(Error::invalid_argument(format!(
            "{r} spikes need dimension p > {r}, got p = {p}"
        )));
    }
    let mut data_rng = rng_for(seed, data_stream);
    let w = complex_gaussian_mat(p, n, &mut data_rng);
    if r == 0 {
        return Ok(SnapshotMatrix::from_mat_unchecked(w));
    }
    let mut dir_rng = rng_for(seed, dir_stream);
    let u = orthonormal_columns(p, r, &mut dir_rng);
    // X = (I + Σ (sqrt(1+δ)−1) u u^H) W applied column-by-column
    let mut x = w;
    let proj = u.adjoint() * &x; // r x n
    for (l, &delta) in spikes.deltas().iter().enumerate() {
        let f = (1.0 + delta).sqrt() - 1.0;
        for j in 0..n {
            let s = proj[(l, j)] * f;
            for i in 0..p {
                let add = u[(i, l)] * s;
                x[(i, j)] += add;
            }
        }
    }
    Ok(SnapshotMatrix::from_mat_unchecked(x))
}

/// First r columns of the Q factor of a p×r Ginibre draw: a random
/// orthonormal set.
fn orthonormal_columns<R: Rng + ?Sized>(p: usize, r: usize, rng: &mut R) -> Mat<C64> {
    let g = complex_gaussian_mat(p, r, rng);
    let qr = g.qr();
    let q = qr.compute_thin_Q();
    let mut out = Mat::<C64>::zeros(p, r);
    out.copy_from(&q);
    out
}
