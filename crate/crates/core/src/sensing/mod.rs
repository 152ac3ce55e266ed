//! Signal sources, acquisition models and the distributed streaming
//! detection network.

mod acquire;
mod distributed;
mod mobility;
mod source;

pub use acquire::acquire;
pub use distributed::{
    clt_params_for, coordinate, run_distributed, server_compute, CoordinatorResult,
    ScenarioConfig, ServerResult,
};
pub use mobility::mobility_track;
pub use source::{gen_ar_signal, gen_spiked_samples};

use crate::clt::SpikeModel;
use crate::error::{Error, Result};

/// What a synthetic source emits.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceKind {
    /// Unit complex white noise.
    WhiteNoise,
    /// Columns with covariance I + Σ δ_ℓ u_ℓ u_ℓᴴ (descending positive δ).
    Spiked { deltas: Vec<f64> },
    /// Auto-regression filter y(n) = (1+r)x(n) + r·y(n−1) on white noise,
    /// run independently on real and imaginary parts.
    Ar { r: f64 },
}

/// A signal source plus how strongly it is mixed into unit noise.
///
/// `snr_db` applies to the `Ar` source: the unit-variance signal is scaled by
/// 10^(snr_db/20) and added to unit white noise. Without it the source is
/// emitted clean. White-noise and spiked sources define their own power and
/// ignore the field.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SourceSpec {
    #[serde(flatten)]
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
}

impl SourceSpec {
    pub fn white_noise() -> Self {
        Self {
            kind: SourceKind::WhiteNoise,
            snr_db: None,
        }
    }

    pub fn spiked(deltas: Vec<f64>) -> Self {
        Self {
            kind: SourceKind::Spiked { deltas },
            snr_db: None,
        }
    }

    pub fn ar(r: f64, snr_db: Option<f64>) -> Self {
        Self {
            kind: SourceKind::Ar { r },
            snr_db,
        }
    }

    /// Checks the parameters that serde cannot.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            SourceKind::WhiteNoise => Ok(()),
            SourceKind::Spiked { deltas } => {
                SpikeModel::new(deltas.clone()).map(|_| ())
            }
            SourceKind::Ar { r } => {
                if r.abs() >= 1.0 {
                    Err(Error::domain(format!(
                        "AR coefficient r = {r} gives an unstable filter (|r| must be < 1)"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Spike model of a spiked source, if that is what this is.
    pub fn spike_model(&self) -> Result<Option<SpikeModel>> {
        match &self.kind {
            SourceKind::Spiked { deltas } => Ok(Some(SpikeModel::new(deltas.clone())?)),
            _ => Ok(None),
        }
    }
}
