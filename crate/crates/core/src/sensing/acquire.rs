//! Acquisition models: turning a source into a snapshot ensemble.

use super::source::{ar_stationary_variance, gen_ar_with, gen_spiked_with_streams};
use super::{SourceKind, SourceSpec};
use crate::clt::SpikeModel;
use crate::error::Result;
use crate::rmt::rng::{complex_gaussian, complex_gaussian_mat, rng_for};
use crate::rmt::{AcquisitionMode, SnapshotEnsemble, SnapshotMatrix};
use crate::C64;
use faer::Mat;

/// Builds an L-snapshot ensemble of N×T captures from a source.
///
/// Time-evolving: the same array keeps sampling, so row i of snapshot j+1
/// continues row i's stream of snapshot j (and a spiked source keeps its
/// spike directions). Space-distributed: every snapshot comes from an
/// independent receiver with a fresh stream of the same specification.
///
/// When `snr_db` is set on an AR source, each entry is
/// signal·10^(snr_db/20) + unit white noise, with the AR signal normalized to
/// unit power first.
pub fn acquire(
    source: &SourceSpec,
    mode: AcquisitionMode,
    n: usize,
    t: usize,
    l: usize,
    seed: u64,
) -> Result<SnapshotEnsemble> {
    source.validate()?;
    if n == 0 || t == 0 || l == 0 {
        return Err(crate::Error::invalid_argument(
            "acquire needs positive N, T and L",
        ));
    }
    let snapshots = match &source.kind {
        SourceKind::WhiteNoise => white_snapshots(n, t, l, seed),
        SourceKind::Spiked { deltas } => {
            let spikes = SpikeModel::new(deltas.clone())?;
            spiked_snapshots(&spikes, mode, n, t, l, seed)?
        }
        SourceKind::Ar { r } => ar_snapshots(*r, source.snr_db, mode, n, t, l, seed)?,
    };
    let snapshots = snapshots
        .into_iter()
        .enumerate()
        .map(|(j, s)| s.with_label(j))
        .collect();
    SnapshotEnsemble::new(snapshots, mode)
}

fn white_snapshots(n: usize, t: usize, l: usize, seed: u64) -> Vec<SnapshotMatrix> {
    (0..l)
        .map(|j| {
            let mut rng = rng_for(seed, j as u64);
            SnapshotMatrix::from_mat_unchecked(complex_gaussian_mat(n, t, &mut rng))
        })
        .collect()
}

fn spiked_snapshots(
    spikes: &SpikeModel,
    mode: AcquisitionMode,
    n: usize,
    t: usize,
    l: usize,
    seed: u64,
) -> Result<Vec<SnapshotMatrix>> {
    (0..l)
        .map(|j| match mode {
            // shared spike directions, fresh data per snapshot
            AcquisitionMode::TimeEvolving => {
                gen_spiked_with_streams(n, t, spikes, seed, 0, 1 + j as u64)
            }
            // independent receivers: fresh directions and data
            AcquisitionMode::SpaceDistributed => gen_spiked_with_streams(
                n,
                t,
                spikes,
                seed,
                1_000 + 2 * j as u64,
                1_001 + 2 * j as u64,
            ),
        })
        .collect()
}

fn ar_snapshots(
    r: f64,
    snr_db: Option<f64>,
    mode: AcquisitionMode,
    n: usize,
    t: usize,
    l: usize,
    seed: u64,
) -> Result<Vec<SnapshotMatrix>> {
    // normalize the complex AR sample to unit power: each real part carries
    // the stationary variance, and the complex pair halves it
    let inv_norm = 1.0 / (2.0 * ar_stationary_variance(r)).sqrt();
    let amp = snr_db.map(|db| 10f64.powf(db / 20.0));

    // per-row AR streams; time-evolving rows continue across snapshots
    let row_series = |row: usize, total: usize, stream_base: u64| -> Result<Vec<C64>> {
        let mut re_rng = rng_for(seed, stream_base + 2 * row as u64);
        let mut im_rng = rng_for(seed, stream_base + 2 * row as u64 + 1);
        let re = gen_ar_with(r, total, &mut re_rng)?;
        let im = gen_ar_with(r, total, &mut im_rng)?;
        Ok(re
            .into_iter()
            .zip(im)
            .map(|(a, b)| C64::new(a, b) * inv_norm)
            .collect())
    };

    let mut snapshots = Vec::with_capacity(l);
    match mode {
        AcquisitionMode::TimeEvolving => {
            let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n);
            for i in 0..n {
                rows.push(row_series(i, t * l, 0)?);
            }
            for j in 0..l {
                let mut noise_rng = rng_for(seed, 1_000_000 + j as u64);
                let mut m = Mat::<C64>::zeros(n, t);
                for (i, row) in rows.iter().enumerate() {
                    for k in 0..t {
                        let sig = row[j * t + k];
                        m[(i, k)] = match amp {
                            Some(a) => sig * a + complex_gaussian(&mut noise_rng),
                            None => sig,
                        };
                    }
                }
                snapshots.push(SnapshotMatrix::from_mat_unchecked(m));
            }
        }
        AcquisitionMode::SpaceDistributed => {
            for j in 0..l {
                let stream_base = 10_000 * (j as u64 + 1);
                let mut noise_rng = rng_for(seed, 1_000_000 + j as u64);
                let mut m = Mat::<C64>::zeros(n, t);
                for i in 0..n {
                    let row = row_series(i, t, stream_base)?;
                    for k in 0..t {
                        m[(i, k)] = match amp {
                            Some(a) => row[k] * a + complex_gaussian(&mut noise_rng),
                            None => row[k],
                        };
                    }
                }
                snapshots.push(SnapshotMatrix::from_mat_unchecked(m));
            }
        }
    }
    Ok(snapshots)
}
