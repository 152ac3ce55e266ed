//! Snapshot-combination pipelines.
//!
//! Rectangular N×T captures are made square through the singular-value
//! equivalent X̃ = sqrt(X Xᴴ)·U (Haar U), which preserves the singular-value
//! data the limiting laws depend on. Each square factor is scaled by 1/√T so
//! the noise-only outer ring radius sits at 1. Captures that are already
//! square are used directly — the product is well-defined for them and the
//! polar factor of an isotropic matrix is Haar anyway.

use super::rng::{haar_unitary, rng_for};
use super::{
    eigenvalues_general, hermitian_sqrt_psd, sample_covariance, ComplexSpectrum, PipelineTag,
    SnapshotEnsemble, SnapshotMatrix,
};
use crate::error::{Error, Result};
use crate::C64;
use faer::Mat;
use rand::Rng;

/// Knobs for the snapshot pipelines.
///
/// `standardize` recenters and rescales every row first (on by default; raw
/// mode exists for feeding pre-conditioned or synthetic exact inputs).
/// `normalize` applies the 1/√T factor scaling that puts the theoretical
/// outer ring radius at 1.
#[derive(Debug, Clone, Copy)]
pub struct ChainOptions {
    pub standardize: bool,
    pub normalize: bool,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            standardize: true,
            normalize: true,
        }
    }
}

impl ChainOptions {
    /// Skip row standardization (raw inputs).
    pub fn raw() -> Self {
        Self {
            standardize: false,
            normalize: true,
        }
    }
}

/// Rescales each row to sample mean 0 and sample variance 1.
///
/// Variance here is the complex one, (1/T)·Σ|z − m|²; a constant row has
/// nothing to rescale and is rejected.
pub fn standardize_rows(x: &SnapshotMatrix) -> Result<SnapshotMatrix> {
    let (n, t) = (x.nrows(), x.ncols());
    if t < 2 {
        return Err(Error::invalid_argument(
            "standardize_rows needs at least 2 samples per row",
        ));
    }
    let mut out = Mat::<C64>::zeros(n, t);
    for i in 0..n {
        let mut mean = C64::new(0.0, 0.0);
        for j in 0..t {
            mean += x.entry(i, j);
        }
        mean /= t as f64;
        let mut var = 0.0f64;
        for j in 0..t {
            var += (x.entry(i, j) - mean).norm_sqr();
        }
        var /= t as f64;
        if var <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateRow { row: i });
        }
        let inv = 1.0 / var.sqrt();
        for j in 0..t {
            out[(i, j)] = (x.entry(i, j) - mean) * inv;
        }
    }
    Ok(SnapshotMatrix::from_mat_unchecked(out))
}

/// Singular-value equivalent of an N×T capture: X̃ = sqrt(X Xᴴ)·U with U an
/// N×N Haar unitary drawn from `rng`. The singular values of X̃ equal those
/// of X.
pub fn sve_transform<R: Rng + ?Sized>(x: &SnapshotMatrix, rng: &mut R) -> Result<Mat<C64>> {
    let (n, t) = (x.nrows(), x.ncols());
    if t < n {
        return Err(Error::invalid_argument(format!(
            "sve_transform requires T >= N, got N={n}, T={t}"
        )));
    }
    // sqrt(X X^H) = sqrt(T) * sqrt(sample covariance)
    let s = sample_covariance(x)?;
    let root = hermitian_sqrt_psd(&s)?;
    let u = haar_unitary(n, rng);
    let scale = (t as f64).sqrt();
    Ok((&root * &u) * faer::Scale(C64::new(scale, 0.0)))
}

/// [`sve_transform`] with a self-contained seed, for reproducible one-offs.
pub fn sve_transform_seeded(x: &SnapshotMatrix, seed: u64) -> Result<Mat<C64>> {
    let mut rng = rng_for(seed, 0);
    sve_transform(x, &mut rng)
}

/// Square factor a pipeline multiplies: standardized if asked, made square
/// through the SVE when rectangular, and 1/√T-scaled when normalizing.
fn square_factor<R: Rng + ?Sized>(
    x: &SnapshotMatrix,
    opts: ChainOptions,
    rng: &mut R,
) -> Result<Mat<C64>> {
    let owned;
    let x = if opts.standardize {
        owned = standardize_rows(x)?;
        &owned
    } else {
        x
    };
    let (n, t) = (x.nrows(), x.ncols());
    let mut f = if t > n {
        sve_transform(x, rng)?
    } else {
        x.mat().clone()
    };
    if opts.normalize {
        let inv = 1.0 / (t as f64).sqrt();
        f *= faer::Scale(C64::new(inv, 0.0));
    }
    Ok(f)
}

/// Eigenvalues of the ordered product of the ensemble's square factors.
///
/// Under noise the moduli follow the ring law with inner radius
/// (1−c)^{L/2} and outer radius 1 (for `normalize` on).
pub fn product_chain<R: Rng + ?Sized>(
    e: &SnapshotEnsemble,
    opts: ChainOptions,
    rng: &mut R,
) -> Result<ComplexSpectrum> {
    let mut z: Option<Mat<C64>> = None;
    for snap in e.snapshots() {
        let f = square_factor(snap, opts, rng)?;
        z = Some(match z {
            None => f,
            Some(acc) => acc * f,
        });
    }
    let z = z.expect("ensemble is non-empty");
    Ok(eigenvalues_general(&z)?.retagged(PipelineTag::Product))
}

/// Spectrum of the geometric mean Z^{1/L}: principal L-th roots of the
/// product-chain eigenvalues (valid since Z is almost surely diagonalizable).
pub fn geometric_mean_spectrum<R: Rng + ?Sized>(
    e: &SnapshotEnsemble,
    opts: ChainOptions,
    rng: &mut R,
) -> Result<ComplexSpectrum> {
    let l = e.len() as f64;
    let product = product_chain(e, opts, rng)?;
    let values: Vec<C64> = product
        .values()
        .iter()
        .map(|z| {
            if z.norm() == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                // principal branch: |z|^{1/L} e^{i arg(z)/L}, arg in (-pi, pi]
                C64::from_polar(z.norm().powf(1.0 / l), z.arg() / l)
            }
        })
        .collect();
    ComplexSpectrum::new(values, product.source_dim(), PipelineTag::GeometricMean)
}

/// Spectrum of the arithmetic mean: snapshots are averaged entrywise,
/// rescaled by √L to restore unit entry variance, then run through the
/// single-matrix pipeline.
pub fn arithmetic_mean_spectrum<R: Rng + ?Sized>(
    e: &SnapshotEnsemble,
    opts: ChainOptions,
    rng: &mut R,
) -> Result<ComplexSpectrum> {
    let (n, t) = e.dims();
    let l = e.len();
    let mut acc = Mat::<C64>::zeros(n, t);
    for snap in e.snapshots() {
        let owned;
        let s = if opts.standardize {
            owned = standardize_rows(snap)?;
            &owned
        } else {
            snap
        };
        for j in 0..t {
            for i in 0..n {
                acc[(i, j)] += s.entry(i, j);
            }
        }
    }
    // mean of L unit-variance terms has variance 1/L; scale back up
    let scale = (l as f64).sqrt() / l as f64;
    for j in 0..t {
        for i in 0..n {
            acc[(i, j)] *= scale;
        }
    }
    let mean = SnapshotMatrix::from_mat_unchecked(acc);
    let f = square_factor(
        &mean,
        ChainOptions {
            standardize: false,
            normalize: opts.normalize,
        },
        rng,
    )?;
    Ok(eigenvalues_general(&f)?.retagged(PipelineTag::ArithmeticMean))
}

/// Eigenvalues of a product of k independent square N×N Ginibre factors,
/// each scaled by 1/√N. Under this normalization the moduli follow the
/// full-disk ring law (c = 1, L = k).
pub fn ginibre_product_spectrum(n: usize, k: usize, seed: u64) -> Result<ComplexSpectrum> {
    if n == 0 || k == 0 {
        return Err(Error::invalid_argument(
            "ginibre product needs positive dimension and factor count",
        ));
    }
    let inv = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut z: Option<Mat<C64>> = None;
    for f in 0..k {
        let mut rng = rng_for(seed, f as u64);
        let g = super::rng::complex_gaussian_mat(n, n, &mut rng) * faer::Scale(inv);
        z = Some(match z {
            None => g,
            Some(acc) => acc * g,
        });
    }
    Ok(eigenvalues_general(&z.expect("k >= 1"))?.retagged(PipelineTag::Product))
}
