pub mod detect;
pub mod distributed;
pub mod laws;
pub mod mobility;
pub mod selftest;
pub mod spectrum;

use anyhow::{bail, Context, Result};
use rmtsense_core::{
    acquire, load_capture, AcquisitionMode, CaptureFormat, SnapshotEnsemble, SnapshotMatrix,
    SourceSpec,
};
use std::path::{Path, PathBuf};

/// Shared synthetic-source flags.
#[derive(clap::Args, Clone)]
pub struct SourceArgs {
    /// Synthetic source: white, ar or spiked.
    #[arg(long, default_value = "white")]
    pub source: SourceName,
    /// AR(1) coefficient for --source ar.
    #[arg(long, default_value_t = 0.9)]
    pub ar_r: f64,
    /// Spike strengths (descending) for --source spiked, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Vec<f64>,
    /// Signal-to-noise ratio in dB for mixing an AR source into unit noise.
    #[arg(long)]
    pub snr_db: Option<f64>,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum SourceName {
    White,
    Ar,
    Spiked,
}

impl SourceArgs {
    pub fn to_spec(&self) -> Result<SourceSpec> {
        let spec = match self.source {
            SourceName::White => SourceSpec::white_noise(),
            SourceName::Ar => SourceSpec::ar(self.ar_r, self.snr_db),
            SourceName::Spiked => {
                if self.deltas.is_empty() {
                    bail!("--source spiked needs --deltas");
                }
                SourceSpec::spiked(self.deltas.clone())
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum FormatName {
    Iq32,
    Csv,
}

impl From<FormatName> for CaptureFormat {
    fn from(f: FormatName) -> Self {
        match f {
            FormatName::Iq32 => CaptureFormat::Iq32,
            FormatName::Csv => CaptureFormat::Csv,
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum ModeName {
    Time,
    Space,
}

impl From<ModeName> for AcquisitionMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Time => AcquisitionMode::TimeEvolving,
            ModeName::Space => AcquisitionMode::SpaceDistributed,
        }
    }
}

/// Loads capture files as the snapshots of one ensemble.
pub fn ensemble_from_captures(
    paths: &[PathBuf],
    format: CaptureFormat,
    mode: AcquisitionMode,
) -> Result<SnapshotEnsemble> {
    let snaps: Vec<SnapshotMatrix> = paths
        .iter()
        .map(|p| {
            load_capture(p, format, None).with_context(|| format!("loading {}", p.display()))
        })
        .collect::<Result<_>>()?;
    Ok(SnapshotEnsemble::new(snaps, mode)?)
}

/// Builds a synthetic ensemble from shared flags.
pub fn synthetic_ensemble(
    source: &SourceSpec,
    mode: AcquisitionMode,
    n: usize,
    t: usize,
    l: usize,
    seed: u64,
) -> Result<SnapshotEnsemble> {
    Ok(acquire(source, mode, n, t, l, seed)?)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(())
}
