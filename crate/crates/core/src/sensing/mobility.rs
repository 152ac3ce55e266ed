//! Inner-radius tracking over a stream of snapshot ensembles.

use crate::detect::inner_radius_estimate;
use crate::error::{Error, Result};
use crate::laws::RingLawParams;
use crate::rmt::{product_chain, ChainOptions, SnapshotEnsemble};
use rand::Rng;

/// Runs the product pipeline over each ensemble in the stream and emits
/// (index, inner-radius estimate) pairs. The ring-law inner radius shrinks
/// with the correlation present in the data, so this series is the mobility
/// (or source-correlation) tracker.
///
/// Every ensemble must share one (N, T) shape and a factor count compatible
/// with `params.l`; a shape change mid-stream is an error. An empty stream
/// produces an empty series.
pub fn mobility_track<I, R>(
    ensembles: I,
    params: RingLawParams,
    quantile: f64,
    rng: &mut R,
) -> Result<Vec<(usize, f64)>>
where
    I: IntoIterator<Item = SnapshotEnsemble>,
    R: Rng + ?Sized,
{
    let mut series = Vec::new();
    let mut dims: Option<(usize, usize, usize)> = None;
    for (idx, e) in ensembles.into_iter().enumerate() {
        let (n, t) = e.dims();
        let shape = (n, t, e.len());
        match dims {
            None => {
                if e.len() != params.l {
                    return Err(Error::InvalidStream(format!(
                        "ensemble {idx} has L={} but the ring parameters say L={}",
                        e.len(),
                        params.l
                    )));
                }
                dims = Some(shape);
            }
            Some(d) if d != shape => {
                return Err(Error::InvalidStream(format!(
                    "ensemble {idx} is {}x{} with L={}, stream started as {}x{} with L={}",
                    n,
                    t,
                    e.len(),
                    d.0,
                    d.1,
                    d.2
                )));
            }
            _ => {}
        }
        let spec = product_chain(&e, ChainOptions::default(), rng)?;
        series.push((idx, inner_radius_estimate(&spec, quantile)?));
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::rng::rng_for;
    use crate::rmt::AcquisitionMode;
    use crate::sensing::{acquire, SourceSpec};

    #[test]
    fn empty_stream_is_empty_series() {
        let params = RingLawParams::new(0.5, 3).unwrap();
        let mut rng = rng_for(0, 0);
        let out = mobility_track(Vec::new(), params, 0.02, &mut rng).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn dimension_drift_is_rejected() {
        let params = RingLawParams::new(0.5, 2).unwrap();
        let a = acquire(
            &SourceSpec::white_noise(),
            AcquisitionMode::TimeEvolving,
            8,
            16,
            2,
            1,
        )
        .unwrap();
        let b = acquire(
            &SourceSpec::white_noise(),
            AcquisitionMode::TimeEvolving,
            8,
            24,
            2,
            2,
        )
        .unwrap();
        let mut rng = rng_for(0, 0);
        let err = mobility_track(vec![a, b], params, 0.02, &mut rng).unwrap_err();
        assert!(matches!(err, Error::InvalidStream(_)));
    }

    #[test]
    fn series_indexes_in_order() {
        let params = RingLawParams::new(0.5, 2).unwrap();
        let es: Vec<_> = (0..3)
            .map(|k| {
                acquire(
                    &SourceSpec::white_noise(),
                    AcquisitionMode::TimeEvolving,
                    8,
                    16,
                    2,
                    k,
                )
                .unwrap()
            })
            .collect();
        let mut rng = rng_for(5, 0);
        let out = mobility_track(es, params, 0.02, &mut rng).unwrap();
        assert_eq!(out.len(), 3);
        for (k, (idx, r)) in out.iter().enumerate() {
            assert_eq!(*idx, k);
            assert!(*r >= 0.0);
        }
    }
}
