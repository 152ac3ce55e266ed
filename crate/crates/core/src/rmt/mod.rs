//! Snapshot matrices, covariance estimation, eigensolvers and the
//! snapshot-combination pipelines.
//!
//! Everything here works on dense complex matrices. A [`SnapshotMatrix`] is a
//! single N×T capture (N antennas, T samples per antenna); a
//! [`SnapshotEnsemble`] is an ordered batch of L captures sharing one shape
//! together with the acquisition mode that produced them.

mod eig;
mod pipeline;
pub(crate) mod rng;

pub use eig::{eigenvalues_general, eigenvalues_hermitian};
pub use pipeline::{
    arithmetic_mean_spectrum, geometric_mean_spectrum, ginibre_product_spectrum, product_chain,
    standardize_rows, sve_transform, sve_transform_seeded, ChainOptions,
};
pub use rng::haar_unitary;

pub(crate) use eig::hermitian_sqrt_psd;

use crate::error::{Error, Result};
use crate::C64;
use faer::Mat;

/// How an ensemble of snapshots was acquired.
///
/// `TimeEvolving` repeats the capture on the same receiver array so snapshots
/// are successive in time; `SpaceDistributed` gathers one capture from each of
/// L independent receivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcquisitionMode {
    TimeEvolving,
    SpaceDistributed,
}

/// One N×T complex capture.
#[derive(Debug, Clone)]
pub struct SnapshotMatrix {
    mat: Mat<C64>,
    label: Option<usize>,
}

impl SnapshotMatrix {
    /// Wraps a dense matrix, rejecting empty shapes and non-finite entries.
    pub fn new(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() == 0 || mat.ncols() == 0 {
            return Err(Error::invalid_argument(format!(
                "snapshot must be non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::InvalidData(format!(
                        "non-finite entry at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { mat, label: None })
    }

    /// Builds a snapshot from an entry generator, `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(Mat::from_fn(rows, cols, f))
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        Self { mat, label: None }
    }

    pub fn with_label(mut self, label: usize) -> Self {
        self.label = Some(label);
        self
    }

    /// Number of rows (antennas / dimensions), N.
    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of columns (samples per antenna), T.
    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn label(&self) -> Option<usize> {
        self.label
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Borrow the underlying dense matrix.
    pub fn mat(&self) -> &Mat<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }
}

/// An ordered list of equally-shaped snapshots plus their acquisition mode.
#[derive(Debug, Clone)]
pub struct SnapshotEnsemble {
    snapshots: Vec<SnapshotMatrix>,
    mode: AcquisitionMode,
}

impl SnapshotEnsemble {
    /// Validates that every snapshot shares one N×T shape with T ≥ N, so the
    /// per-snapshot ratio c = N/T lies in (0, 1].
    pub fn new(snapshots: Vec<SnapshotMatrix>, mode: AcquisitionMode) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::invalid_argument("ensemble needs at least 1 snapshot"));
        }
        let (n, t) = (snapshots[0].nrows(), snapshots[0].ncols());
        for (j, s) in snapshots.iter().enumerate() {
            if s.nrows() != n || s.ncols() != t {
                return Err(Error::invalid_argument(format!(
                    "snapshot {j} is {}x{}, expected {n}x{t}",
                    s.nrows(),
                    s.ncols()
                )));
            }
        }
        if t < n {
            return Err(Error::invalid_argument(format!(
                "ensemble requires T >= N (c = N/T in (0,1]), got N={n}, T={t}"
            )));
        }
        Ok(Self { snapshots, mode })
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Shared (N, T) shape.
    pub fn dims(&self) -> (usize, usize) {
        (self.snapshots[0].nrows(), self.snapshots[0].ncols())
    }

    /// Per-snapshot aspect ratio c = N/T.
    pub fn c_ratio(&self) -> f64 {
        let (n, t) = self.dims();
        n as f64 / t as f64
    }

    pub fn mode(&self) -> AcquisitionMode {
        self.mode
    }

    pub fn snapshots(&self) -> &[SnapshotMatrix] {
        &self.snapshots
    }
}

/// A p×p Hermitian matrix; produced positive semidefinite by
/// [`sample_covariance`].
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: Mat<C64>,
}

impl HermitianMatrix {
    /// Accepts a matrix that is Hermitian up to roundoff (asymmetry below
    /// `1e-12` of the largest entry) and stores its exact Hermitian part.
    pub fn new(mat: Mat<C64>) -> Result<Self> {
        let p = mat.nrows();
        if p == 0 || mat.ncols() != p {
            return Err(Error::invalid_argument(format!(
                "expected square non-empty matrix, got {}x{}",
                p,
                mat.ncols()
            )));
        }
        let mut scale = 0.0f64;
        for j in 0..p {
            for i in 0..p {
                scale = scale.max(mat[(i, j)].norm());
            }
        }
        let tol = 1e-12 * scale.max(1.0);
        for j in 0..p {
            if mat[(j, j)].im.abs() > tol {
                return Err(Error::invalid_argument(format!(
                    "diagonal entry {j} has imaginary part {:.3e}",
                    mat[(j, j)].im
                )));
            }
            for i in 0..j {
                if (mat[(i, j)] - mat[(j, i)].conj()).norm() > tol {
                    return Err(Error::invalid_argument(format!(
                        "entries ({i},{j}) and ({j},{i}) are not conjugate"
                    )));
                }
            }
        }
        Ok(Self::symmetrized(mat))
    }

    /// Stores (A + Aᴴ)/2 so downstream code sees an exactly Hermitian matrix.
    pub(crate) fn symmetrized(mat: Mat<C64>) -> Self {
        let p = mat.nrows();
        let mut out = Mat::<C64>::zeros(p, p);
        for j in 0..p {
            out[(j, j)] = C64::new(mat[(j, j)].re, 0.0);
            for i in 0..j {
                let v = (mat[(i, j)] + mat[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        Self { mat: out }
    }

    /// Dimension p.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Trace (exactly real for a Hermitian matrix).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn mat(&self) -> &Mat<C64> {
        &self.mat
    }

    /// Returns the matrix scaled by a real factor (still Hermitian).
    pub fn scaled(&self, factor: f64) -> HermitianMatrix {
        let p = self.dim();
        HermitianMatrix {
            mat: Mat::from_fn(p, p, |i, j| self.mat[(i, j)] * factor),
        }
    }
}

/// Which pipeline produced a complex spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineTag {
    Product,
    GeometricMean,
    ArithmeticMean,
    Raw,
}

/// All eigenvalues (with multiplicity) of an N×N complex matrix.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    values: Vec<C64>,
    source_dim: usize,
    tag: PipelineTag,
}

impl ComplexSpectrum {
    pub fn new(values: Vec<C64>, source_dim: usize, tag: PipelineTag) -> Result<Self> {
        if values.len() != source_dim {
            return Err(Error::invalid_argument(format!(
                "spectrum of a {source_dim}-dim matrix must have {source_dim} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidData("non-finite eigenvalue".into()));
        }
        Ok(Self {
            values,
            source_dim,
            tag,
        })
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn tag(&self) -> PipelineTag {
        self.tag
    }

    /// Eigenvalue moduli, in input order.
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    pub(crate) fn retagged(mut self, tag: PipelineTag) -> Self {
        self.tag = tag;
        self
    }

    /// Scales every eigenvalue by a positive real factor.
    pub fn scaled(mut self, factor: f64) -> Self {
        for v in &mut self.values {
            *v *= factor;
        }
        self
    }
}

/// Draws an N×T matrix with i.i.d. circularly-symmetric complex Gaussian
/// entries of unit variance (real and imaginary parts each N(0, 1/2)).
///
/// Deterministic for a fixed seed.
pub fn gen_ginibre(rows: usize, cols: usize, seed: u64) -> Result<SnapshotMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid_argument(format!(
            "ginibre matrix needs positive dimensions, got {rows}x{cols}"
        )));
    }
    let mut rng = rng::rng_for(seed, 0);
    Ok(SnapshotMatrix::from_mat_unchecked(
        rng::complex_gaussian_mat(rows, cols, &mut rng),
    ))
}

/// Sample covariance S = (1/T) · X Xᴴ of a snapshot; p = N, Hermitian PSD.
pub fn sample_covariance(x: &SnapshotMatrix) -> Result<HermitianMatrix> {
    let t = x.ncols();
    let s = (x.mat() * x.mat().adjoint()) * faer::Scale(C64::new(1.0 / t as f64, 0.0));
    // gemm roundoff can leave the off-diagonal pairs asymmetric in the last ulp
    Ok(HermitianMatrix::symmetrized(s))
}
