//! Eigenvalue extraction.
//!
//! Hermitian spectra are delegated to faer's self-adjoint solver. The general
//! (non-Hermitian) solver is implemented here directly: Householder reduction
//! to upper Hessenberg form followed by implicitly restarted single-shift QR
//! with Wilkinson shifts, which is what the snapshot-product pipelines need at
//! N of a few hundred.

use super::{ComplexSpectrum, HermitianMatrix, PipelineTag};
use crate::error::{Error, Result};
use crate::C64;
use faer::{Mat, Side};

/// Real eigenvalues of a Hermitian matrix, sorted descending.
///
/// The sum equals the trace to ~1e-10 relative; checked in tests against the
/// trace oracle.
pub fn eigenvalues_hermitian(s: &HermitianMatrix) -> Result<Vec<f64>> {
    let mut vals = s
        .mat()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("hermitian eigensolver: {e:?}")))?;
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    Ok(vals)
}

/// Hermitian eigendecomposition with vectors; `(values ascending, U)`.
fn hermitian_eig_vectors(s: &HermitianMatrix) -> Result<(Vec<f64>, Mat<C64>)> {
    let evd = s
        .mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("hermitian eigensolver: {e:?}")))?;
    let p = s.dim();
    let vals: Vec<f64> = (0..p).map(|i| evd.S()[i].re).collect();
    let mut u = Mat::<C64>::zeros(p, p);
    u.copy_from(evd.U());
    Ok((vals, u))
}

/// Principal square root of a PSD Hermitian matrix.
///
/// Eigenvalues within `-1e-10 * max|λ|` of zero are clamped to zero; anything
/// more negative is a genuine PSD violation and is rejected.
pub(crate) fn hermitian_sqrt_psd(s: &HermitianMatrix) -> Result<Mat<C64>> {
    let (vals, u) = hermitian_eig_vectors(s)?;
    let p = s.dim();
    let max_abs = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let floor = -1e-10 * max_abs.max(1e-300);
    let mut roots = vec![0.0f64; p];
    for (k, &v) in vals.iter().enumerate() {
        if v < floor {
            return Err(Error::Domain(format!(
                "matrix is not PSD: eigenvalue {v:.6e} below tolerance"
            )));
        }
        roots[k] = v.max(0.0).sqrt();
    }
    // U sqrt(Λ) U^H
    let mut b = Mat::<C64>::zeros(p, p);
    for j in 0..p {
        for i in 0..p {
            b[(i, j)] = u[(i, j)] * roots[j];
        }
    }
    Ok(&b * u.adjoint())
}

/// All eigenvalues of a square complex matrix, with multiplicity.
///
/// Hessenberg reduction plus shifted QR iteration, eigenvalues only. The
/// iteration budget is 100·N sweeps; running out is reported as a numerical
/// failure naming the block that refused to deflate.
pub fn eigenvalues_general(m: &Mat<C64>) -> Result<ComplexSpectrum> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::invalid_argument(format!(
            "eigenvalues_general needs a square non-empty matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidData(format!(
                    "non-finite entry at ({i}, {j})"
                )));
            }
        }
    }
    let mut h = Dense::from_mat(m);
    h.hessenberg();
    let values = h.qr_eigenvalues(100 * n)?;
    ComplexSpectrum::new(values, n, PipelineTag::Raw)
}

/// Column-major working storage for the QR iteration.
struct Dense {
    n: usize,
    a: Vec<C64>,
}

impl Dense {
    fn from_mat(m: &Mat<C64>) -> Self {
        let n = m.nrows();
        let mut a = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                a[j * n + i] = m[(i, j)];
            }
        }
        Self { n, a }
    }

    #[inline(always)]
    fn at(&self, i: usize, j: usize) -> C64 {
        self.a[j * self.n + i]
    }

    #[inline(always)]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut C64 {
        &mut self.a[j * self.n + i]
    }

    /// Householder reduction to upper Hessenberg form.
    fn hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        for k in 0..n - 2 {
            let mut norm2 = 0.0;
            for i in k + 1..n {
                norm2 += self.at(i, k).norm_sqr();
            }
            if norm2 <= f64::MIN_POSITIVE {
                continue;
            }
            let x0 = self.at(k + 1, k);
            let alpha = norm2.sqrt();
            let beta = if x0.norm() > 0.0 {
                -(x0 / x0.norm()) * alpha
            } else {
                C64::new(-alpha, 0.0)
            };
            let mut v: Vec<C64> = (k + 1..n).map(|i| self.at(i, k)).collect();
            v[0] -= beta;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 <= f64::MIN_POSITIVE {
                continue;
            }
            let tau = 2.0 / vnorm2;
            // (I - tau v v^H) applied from the left to columns k..n
            for j in k..n {
                let mut s = C64::new(0.0, 0.0);
                for (idx, i) in (k + 1..n).enumerate() {
                    s += v[idx].conj() * self.at(i, j);
                }
                s *= tau;
                for (idx, i) in (k + 1..n).enumerate() {
                    *self.at_mut(i, j) -= v[idx] * s;
                }
            }
            // and from the right to columns k+1..n
            for i in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (idx, j) in (k + 1..n).enumerate() {
                    s += self.at(i, j) * v[idx];
                }
                s *= tau;
                for (idx, j) in (k + 1..n).enumerate() {
                    *self.at_mut(i, j) -= s * v[idx].conj();
                }
            }
            *self.at_mut(k + 1, k) = beta;
            for i in k + 2..n {
                *self.at_mut(i, k) = C64::new(0.0, 0.0);
            }
        }
    }

    /// Shifted QR with deflation on the Hessenberg matrix; eigenvalues only.
    fn qr_eigenvalues(&mut self, max_sweeps: usize) -> Result<Vec<C64>> {
        let n = self.n;
        let mut eig = vec![C64::new(0.0, 0.0); n];
        let eps = f64::EPSILON;
        let mut hi = n - 1;
        let mut sweeps = 0usize;
        let mut stall = 0usize;
        loop {
            // walk up from hi looking for a negligible subdiagonal
            let mut lo = hi;
            while lo > 0 {
                let tst = self.at(lo - 1, lo - 1).norm() + self.at(lo, lo).norm();
                let tst = if tst == 0.0 { self.block_norm(0, hi) } else { tst };
                if self.at(lo, lo - 1).norm() <= eps * tst {
                    *self.at_mut(lo, lo - 1) = C64::new(0.0, 0.0);
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                eig[hi] = self.at(hi, hi);
                if hi == 0 {
                    return Ok(eig);
                }
                hi -= 1;
                stall = 0;
                continue;
            }
            if lo + 1 == hi {
                let (l1, l2) = eig2(
                    self.at(lo, lo),
                    self.at(lo, hi),
                    self.at(hi, lo),
                    self.at(hi, hi),
                );
                eig[lo] = l1;
                eig[hi] = l2;
                if lo == 0 {
                    return Ok(eig);
                }
                hi = lo - 1;
                stall = 0;
                continue;
            }

            sweeps += 1;
            stall += 1;
            if sweeps > max_sweeps {
                return Err(Error::NumericalFailure(format!(
                    "QR iteration did not converge after {sweeps} sweeps \
                     (active block {lo}..={hi} of {n})"
                )));
            }

            // Wilkinson shift: trailing 2x2 eigenvalue nearest h[hi][hi]
            let d = self.at(hi, hi);
            let (l1, l2) = eig2(
                self.at(hi - 1, hi - 1),
                self.at(hi - 1, hi),
                self.at(hi, hi - 1),
                d,
            );
            let mut shift = if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 };
            if stall % 10 == 0 {
                // exceptional shift to break symmetric stalls
                shift = d + C64::new(
                    self.at(hi, hi - 1).norm() + self.at(hi - 1, hi - 2).norm(),
                    0.0,
                );
            }
            self.qr_sweep(lo, hi, shift);
        }
    }

    /// One explicit shifted QR step on the active block via Givens rotations.
    fn qr_sweep(&mut self, lo: usize, hi: usize, shift: C64) {
        let m = hi - lo + 1;
        let mut cs = vec![0.0f64; m - 1];
        let mut ss = vec![C64::new(0.0, 0.0); m - 1];
        for i in lo..=hi {
            *self.at_mut(i, i) -= shift;
        }
        // left pass: zero the subdiagonal, H <- G_{m-2}..G_0 H
        for k in 0..m - 1 {
            let i = lo + k;
            let (c, s, r) = givens(self.at(i, i), self.at(i + 1, i));
            cs[k] = c;
            ss[k] = s;
            *self.at_mut(i, i) = r;
            *self.at_mut(i + 1, i) = C64::new(0.0, 0.0);
            for j in i + 1..=hi {
                let x = self.at(i, j);
                let y = self.at(i + 1, j);
                *self.at_mut(i, j) = x * c + s * y;
                *self.at_mut(i + 1, j) = -s.conj() * x + y * c;
            }
        }
        // right pass: H <- H G_0^H..G_{m-2}^H, restoring Hessenberg form
        for k in 0..m - 1 {
            let j = lo + k;
            let c = cs[k];
            let s = ss[k];
            let last = (j + 1).min(hi);
            for i in lo..=last {
                let x = self.at(i, j);
                let y = self.at(i, j + 1);
                *self.at_mut(i, j) = x * c + y * s.conj();
                *self.at_mut(i, j + 1) = -s * x + y * c;
            }
        }
        for i in lo..=hi {
            *self.at_mut(i, i) += shift;
        }
    }

    fn block_norm(&self, lo: usize, hi: usize) -> f64 {
        let mut acc = 0.0f64;
        for j in lo..=hi {
            for i in lo..=(j + 1).min(hi) {
                acc = acc.max(self.at(i, j).norm());
            }
        }
        acc.max(f64::MIN_POSITIVE)
    }
}

/// Eigenvalues of a complex 2x2 matrix [[a, b], [c, d]].
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half = C64::new(0.5, 0.0);
    let tr = a + d;
    let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
    ((tr + disc) * half, (tr - disc) * half)
}

/// Complex Givens rotation: c real, |c|^2 + |s|^2 = 1, such that
/// [c, s; -s̄, c] · [a, b]^T = [r, 0]^T.
fn givens(a: C64, b: C64) -> (f64, C64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0), a);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn, C64::new(bn, 0.0));
    }
    let scale = an.max(bn);
    let nrm = scale * ((an / scale).powi(2) + (bn / scale).powi(2)).sqrt();
    let c = an / nrm;
    let phase = a / an;
    (c, phase * b.conj() / nrm, phase * nrm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::rng::{complex_gaussian_mat, rng_for};
    use crate::rmt::{sample_covariance, SnapshotMatrix};

    fn sort_key(z: &C64) -> (f64, f64) {
        (z.re, z.im)
    }

    #[test]
    fn diagonal_matrix() {
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 2.0),
            (1, 1) => C64::new(3.0, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let mut vals = eigenvalues_general(&m).unwrap().values().to_vec();
        vals.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
        assert!((vals[0] - C64::new(1.0, 2.0)).norm() < 1e-14);
        assert!((vals[1] - C64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_matrix_has_imaginary_pair() {
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => C64::new(1.0, 0.0),
            (1, 0) => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let mut vals = eigenvalues_general(&m).unwrap().values().to_vec();
        vals.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((vals[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((vals[1] - C64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn product_of_eigenvalues_is_determinant() {
        // LU determinant oracle on a random 8x8.
        let mut rng = rng_for(21, 0);
        let m = complex_gaussian_mat(8, 8, &mut rng);
        let det = m.determinant();
        let spec = eigenvalues_general(&m).unwrap();
        let prod: C64 = spec.values().iter().product();
        assert!(
            (prod - det).norm() <= 1e-8 * det.norm(),
            "eigenvalue product {prod} vs determinant {det}"
        );
        let trace: C64 = (0..8).map(|i| m[(i, i)]).sum();
        let sum: C64 = spec.values().iter().sum();
        assert!((sum - trace).norm() <= 1e-10 * trace.norm().max(1.0));
    }

    #[test]
    fn matches_hermitian_solver_on_hermitian_input() {
        let mut rng = rng_for(33, 0);
        let x = SnapshotMatrix::from_mat_unchecked(complex_gaussian_mat(6, 10, &mut rng));
        let s = sample_covariance(&x).unwrap();
        let herm = eigenvalues_hermitian(&s).unwrap();
        let mut gen: Vec<f64> = eigenvalues_general(s.mat())
            .unwrap()
            .values()
            .iter()
            .map(|z| z.re)
            .collect();
        gen.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in herm.iter().zip(gen.iter()) {
            assert!((a - b).abs() < 1e-8, "hermitian {a} vs general {b}");
        }
    }

    #[test]
    fn hermitian_sum_matches_trace() {
        let mut rng = rng_for(4, 0);
        let x = SnapshotMatrix::from_mat_unchecked(complex_gaussian_mat(6, 12, &mut rng));
        let s = sample_covariance(&x).unwrap();
        let eigs = eigenvalues_hermitian(&s).unwrap();
        let sum: f64 = eigs.iter().sum();
        assert!((sum - s.trace()).abs() <= 1e-10 * s.trace().abs());
        assert!(eigs.windows(2).all(|w| w[0] >= w[1]), "descending order");
    }

    #[test]
    fn hermitian_identity_and_diag() {
        let id = HermitianMatrix::new(Mat::from_fn(3, 3, |i, j| {
            C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        }))
        .unwrap();
        assert_eq!(eigenvalues_hermitian(&id).unwrap(), vec![1.0, 1.0, 1.0]);

        let d = HermitianMatrix::new(Mat::from_fn(2, 2, |i, j| {
            if i == j {
                C64::new(if i == 0 { 5.0 } else { 1.0 }, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap();
        assert_eq!(eigenvalues_hermitian(&d).unwrap(), vec![5.0, 1.0]);
    }

    #[test]
    fn rejects_non_square() {
        let m = Mat::<C64>::zeros(2, 3);
        assert!(matches!(
            eigenvalues_general(&m),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn backward_stability_on_small_random() {
        // For each eigenvalue, smallest singular value of (M - λI) must be
        // tiny relative to ||M||.
        let mut rng = rng_for(8, 0);
        let n = 8;
        let m = complex_gaussian_mat(n, n, &mut rng);
        let norm = {
            let mut acc = 0.0;
            for j in 0..n {
                for i in 0..n {
                    acc += m[(i, j)].norm_sqr();
                }
            }
            acc.sqrt()
        };
        let spec = eigenvalues_general(&m).unwrap();
        for &lam in spec.values() {
            let shifted = Mat::from_fn(n, n, |i, j| {
                if i == j {
                    m[(i, j)] - lam
                } else {
                    m[(i, j)]
                }
            });
            let svd = shifted.svd().unwrap();
            let smin = svd.S()[n - 1].re;
            assert!(
                smin <= 1e-8 * norm,
                "sigma_min((M - lambda I)) = {smin:.3e} exceeds 1e-8 * ||M|| = {:.3e}",
                1e-8 * norm
            );
        }
    }

    #[test]
    fn handles_defective_jordan_block() {
        // [[0,1],[0,0]] has a double eigenvalue 0.
        let m = Mat::from_fn(2, 2, |i, j| {
            if i == 0 && j == 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let vals = eigenvalues_general(&m).unwrap();
        for v in vals.values() {
            assert!(v.norm() < 1e-12);
        }
    }
}
