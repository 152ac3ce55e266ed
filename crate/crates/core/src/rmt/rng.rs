//! Seeded randomness helpers.
//!
//! Every random operation in the crate funnels through ChaCha8 streams:
//! `rng_for(seed, stream)` gives independent, reproducible generators for
//! parallel work items (per snapshot, per server, per trial) without any
//! coordination between threads.

use crate::C64;
use faer::Mat;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

/// Independent generator for (seed, stream). ChaCha8 exposes 2^64 disjoint
/// streams per seed, which is what makes parallel Monte Carlo reproducible.
pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One CN(0, 1) draw: real and imaginary parts each N(0, 1/2).
#[inline]
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Dense rows×cols matrix of i.i.d. CN(0, 1) entries, filled column-major.
pub(crate) fn complex_gaussian_mat<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Mat<C64> {
    let mut m = Mat::<C64>::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// A Haar-distributed n×n unitary, via QR of a Ginibre matrix with the
/// R-diagonal phases folded into Q (Mezzadri's recipe; plain QR alone is not
/// Haar).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<C64> {
    let g = complex_gaussian_mat(n, n, rng);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let mut u = Mat::<C64>::zeros(n, n);
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] = q[(i, j)] * phase;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary() {
        let mut rng = rng_for(3, 0);
        let u = haar_unitary(8, &mut rng);
        let id = u.adjoint() * &u;
        for j in 0..8 {
            for i in 0..8 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (id[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12,
                    "U^H U deviates at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn streams_are_independent() {
        let mut a = rng_for(9, 0);
        let mut b = rng_for(9, 1);
        let xa: f64 = a.gen();
        let xb: f64 = b.gen();
        assert_ne!(xa, xb);
    }
}
