//! `rmtsense mobility` — inner-radius time series over ensembles.

use super::{ensure_dir, FormatName, ModeName};
use crate::OutDir;
use anyhow::{bail, Context, Result};
use rand_chacha::rand_core::SeedableRng;
use rmtsense_core::laws::RingLawParams;
use rmtsense_core::{
    acquire, emit_figure, load_capture, mobility_track, AcquisitionMode, FigureData,
    SnapshotEnsemble, SnapshotMatrix, SourceSpec,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(clap::Args)]
pub struct MobilityArgs {
    /// Synthetic schedule of segments, comma separated, each `white:COUNT`,
    /// `arR:COUNT` (e.g. `ar0.9:10`) — COUNT ensembles per segment.
    #[arg(long)]
    segments: Option<String>,
    /// Directory of capture files (sorted lexicographically, grouped into
    /// ensembles of L consecutive captures).
    #[arg(long)]
    captures: Option<PathBuf>,
    /// Capture file format.
    #[arg(long, value_enum, default_value = "iq32")]
    format: FormatName,
    /// Antennas N for synthetic segments.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Samples per antenna T for synthetic segments.
    #[arg(long, default_value_t = 128)]
    t: usize,
    /// Snapshots per ensemble L.
    #[arg(short = 'L', long, default_value_t = 5)]
    l: usize,
    /// Mixing SNR in dB for AR segments.
    #[arg(long, default_value_t = 0.0)]
    snr_db: f64,
    /// Acquisition mode for synthetic segments.
    #[arg(long, value_enum, default_value = "time")]
    mode: ModeName,
    /// Modulus quantile used as the inner-radius estimate.
    #[arg(long, default_value_t = 0.02)]
    quantile: f64,
    /// RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: OutDir,
}

pub fn run(args: &MobilityArgs) -> Result<ExitCode> {
    let ensembles: Vec<SnapshotEnsemble> = match (&args.segments, &args.captures) {
        (Some(schedule), None) => synthetic_stream(args, schedule)?,
        (None, Some(dir)) => capture_stream(args, dir)?,
        _ => bail!("exactly one of --segments or --captures is required"),
    };
    if ensembles.is_empty() {
        bail!("empty ensemble stream");
    }
    let (n, t) = ensembles[0].dims();
    let params = RingLawParams::new(n as f64 / t as f64, args.l)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed ^ 0x00c0_ffee);
    let series = mobility_track(ensembles, params, args.quantile, &mut rng)?;

    let rows: Vec<(f64, f64)> = series.iter().map(|&(i, r)| (i as f64, r)).collect();
    let dir = args.out.resolve();
    ensure_dir(&dir)?;
    let path = dir.join("mobility_series.csv");
    emit_figure(&FigureData::Series(rows), &path)?;
    eprintln!("mobility: wrote {} ({} points)", path.display(), series.len());
    Ok(ExitCode::SUCCESS)
}

fn synthetic_stream(args: &MobilityArgs, schedule: &str) -> Result<Vec<SnapshotEnsemble>> {
    let mut out = Vec::new();
    let mut seed = args.seed;
    for (si, seg) in schedule.split(',').enumerate() {
        let (kind, count) = seg
            .split_once(':')
            .with_context(|| format!("segment {si}: expected KIND:COUNT, got {seg:?}"))?;
        let count: usize = count
            .parse()
            .with_context(|| format!("segment {si}: bad count {count:?}"))?;
        let spec = if kind.eq_ignore_ascii_case("white") {
            SourceSpec::white_noise()
        } else if let Some(r) = kind.strip_prefix("ar") {
            let r: f64 = r
                .parse()
                .with_context(|| format!("segment {si}: bad AR coefficient {r:?}"))?;
            SourceSpec::ar(r, Some(args.snr_db))
        } else {
            bail!("segment {si}: unknown source {kind:?} (use white or ar<r>)");
        };
        for _ in 0..count {
            out.push(acquire(
                &spec,
                args.mode.into(),
                args.n,
                args.t,
                args.l,
                seed,
            )?);
            seed = seed.wrapping_add(1);
        }
    }
    Ok(out)
}

fn capture_stream(args: &MobilityArgs, dir: &PathBuf) -> Result<Vec<SnapshotEnsemble>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.len() < args.l {
        bail!(
            "need at least L = {} captures to form one ensemble, found {}",
            args.l,
            paths.len()
        );
    }
    let mode: AcquisitionMode = args.mode.into();
    paths
        .chunks_exact(args.l)
        .map(|chunk| {
            let snaps: Vec<SnapshotMatrix> = chunk
                .iter()
                .map(|p| {
                    load_capture(p, args.format.into(), None)
                        .with_context(|| format!("loading {}", p.display()))
                })
                .collect::<Result<_>>()?;
            Ok(SnapshotEnsemble::new(snaps, mode)?)
        })
        .collect()
}
