//! `rmtsense spectrum` — eigenvalue clouds of the snapshot pipelines.

use super::{ensemble_from_captures, ensure_dir, FormatName, ModeName, SourceArgs};
use crate::OutDir;
use anyhow::{bail, Result};
use rand_chacha::rand_core::SeedableRng;
use rmtsense_core::laws::RingLawParams;
use rmtsense_core::{
    arithmetic_mean_spectrum, emit_figure, freedman_diaconis_bins, geometric_mean_spectrum,
    ginibre_product_spectrum, histogram_density, product_chain, ring_radial_pdf, ChainOptions,
    ComplexSpectrum, FigureData,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(clap::Args)]
pub struct SpectrumArgs {
    /// Which pipeline to run.
    #[arg(long, value_enum)]
    pipeline: Pipeline,
    /// Antennas / matrix rows N (synthetic data).
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Samples per antenna T (synthetic data).
    #[arg(long, default_value_t = 512)]
    t: usize,
    /// Snapshots per chain (product/gmean/amean) or Ginibre factors k.
    #[arg(short = 'L', long, default_value_t = 5)]
    l: usize,
    /// Independent chains pooled into the figure.
    #[arg(long, default_value_t = 10)]
    snapshots: usize,
    /// Acquisition mode for synthetic ensembles.
    #[arg(long, value_enum, default_value = "time")]
    mode: ModeName,
    #[command(flatten)]
    source: SourceArgs,
    /// RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Capture files to use as the snapshots of one ensemble instead of
    /// synthetic data.
    #[arg(long, value_delimiter = ',')]
    captures: Vec<PathBuf>,
    /// Capture file format.
    #[arg(long, value_enum, default_value = "iq32")]
    format: FormatName,
    /// Histogram bin count (default: Freedman-Diaconis).
    #[arg(long)]
    bins: Option<usize>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Pipeline {
    Product,
    Gmean,
    Amean,
    Ginibre,
}

pub fn run(args: &SpectrumArgs) -> Result<ExitCode> {
    let dir = args.out.resolve();
    ensure_dir(&dir)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed ^ 0x5bd1_e995);

    let mut values = Vec::new();
    let mut c_ratio = args.n as f64 / args.t as f64;
    let l = args.l.max(1);

    if args.pipeline == Pipeline::Ginibre {
        // product of k square Ginibre factors; moduli follow the full-disk
        // ring law (c = 1, L = k)
        c_ratio = 1.0;
        for chain in 0..args.snapshots.max(1) {
            let spec = ginibre_product_spectrum(args.n, l, args.seed + 1000 * chain as u64)?;
            values.extend_from_slice(spec.values());
        }
    } else if !args.captures.is_empty() {
        let e = ensemble_from_captures(&args.captures, args.format.into(), args.mode.into())?;
        c_ratio = e.c_ratio();
        let spec = run_pipeline(args.pipeline, &e, &mut rng)?;
        values.extend_from_slice(spec.values());
    } else {
        let spec_src = args.source.to_spec()?;
        for chain in 0..args.snapshots.max(1) {
            let e = super::synthetic_ensemble(
                &spec_src,
                args.mode.into(),
                args.n,
                args.t,
                l,
                args.seed + chain as u64,
            )?;
            let spec = run_pipeline(args.pipeline, &e, &mut rng)?;
            values.extend_from_slice(spec.values());
        }
    }

    if values.is_empty() {
        bail!("no eigenvalues produced");
    }

    // scatter
    let scatter: Vec<(f64, f64)> = values.iter().map(|z| (z.re, z.im)).collect();
    emit_figure(&FigureData::Scatter(scatter), &dir.join("scatter.csv"))?;

    // radial histogram
    let mut moduli: Vec<f64> = values.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let bins = args.bins.unwrap_or_else(|| freedman_diaconis_bins(&moduli));
    let hi = moduli.last().unwrap().max(1.0) * 1.02;
    let hist = histogram_density(&moduli, 0.0, hi, bins)?;
    emit_figure(&hist, &dir.join("radial_hist.csv"))?;

    // matching law: the product keeps (c, L); gmean and amean concentrate on
    // the L=1 law; the Ginibre product is the full-disk law (c=1, L=k)
    let law_l = match args.pipeline {
        Pipeline::Product | Pipeline::Ginibre => l,
        Pipeline::Gmean | Pipeline::Amean => 1,
    };
    let params = RingLawParams::new(c_ratio.min(1.0), law_l)?;
    let pts = 211usize;
    let curve: Vec<(f64, f64)> = (0..pts)
        .map(|k| {
            let r = 1.05 * k as f64 / (pts - 1) as f64;
            (r, ring_radial_pdf(r, params))
        })
        .collect();
    emit_figure(&FigureData::Curve(curve), &dir.join("law_curve.csv"))?;

    eprintln!(
        "spectrum: wrote scatter.csv, radial_hist.csv, law_curve.csv to {} ({} eigenvalues)",
        dir.display(),
        values.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_pipeline(
    p: Pipeline,
    e: &rmtsense_core::SnapshotEnsemble,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<ComplexSpectrum> {
    let opts = ChainOptions::default();
    Ok(match p {
        Pipeline::Product => product_chain(e, opts, rng)?,
        Pipeline::Gmean => geometric_mean_spectrum(e, opts, rng)?,
        Pipeline::Amean => arithmetic_mean_spectrum(e, opts, rng)?,
        Pipeline::Ginibre => unreachable!("handled by caller"),
    })
}
