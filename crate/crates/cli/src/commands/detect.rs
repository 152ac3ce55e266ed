//! `rmtsense detect` — single-capture LRT detection.

use super::{FormatName, SourceArgs, SourceName};
use anyhow::{bail, Context, Result};
use rmtsense_core::{
    gen_spiked_samples, load_capture, lrt_statistic, report, rmt, sample_covariance,
    standardize_rows, Decision, SpikeModel,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(clap::Args)]
pub struct DetectArgs {
    /// Dimensions p (rows) of the synthetic capture.
    #[arg(long, default_value_t = 200)]
    p: usize,
    /// Samples n (columns); must exceed p.
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[command(flatten)]
    source: SourceArgs,
    /// RNG seed for synthetic data.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Detect on a capture file instead of synthetic data.
    #[arg(long)]
    capture: Option<PathBuf>,
    /// Capture file format.
    #[arg(long, value_enum, default_value = "iq32")]
    format: FormatName,
    /// Standardize capture rows before detection (recommended for raw
    /// hardware captures whose noise floor is uncalibrated).
    #[arg(long)]
    standardize: bool,
    /// Target false-alarm rate.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
}

pub fn run(args: &DetectArgs) -> Result<ExitCode> {
    let x = match &args.capture {
        Some(path) => {
            let loaded = load_capture(path, args.format.into(), None)
                .with_context(|| format!("loading {}", path.display()))?;
            if args.standardize {
                standardize_rows(&loaded)?
            } else {
                loaded
            }
        }
        None => {
            let spikes = match args.source.source {
                SourceName::White => SpikeModel::none(),
                SourceName::Spiked => SpikeModel::new(args.source.deltas.clone())?,
                SourceName::Ar => bail!(
                    "detect calibrates against the spiked-covariance model; \
                     use --source white or --source spiked"
                ),
            };
            gen_spiked_samples(args.p, args.n, &spikes, args.seed)?
        }
    };

    let p = x.nrows();
    let n = x.ncols();
    if n <= p {
        bail!("LRT detection needs n > p, capture is {p}x{n}");
    }
    let c = n as f64 / p as f64;
    let s = sample_covariance(&x)?;
    let eigs = rmt::eigenvalues_hermitian(&s.scaled(n as f64))?;
    let statistic = lrt_statistic(&eigs, p, c)?;

    let h0 = rmtsense_core::lrt_clt_closed(c, &SpikeModel::none())?;
    let h1 = match (&args.capture, args.source.source) {
        (None, SourceName::Spiked) => {
            let spikes = SpikeModel::new(args.source.deltas.clone())?;
            Some(rmtsense_core::sensing::clt_params_for(c, &spikes)?)
        }
        _ => None,
    };
    let rep = report(statistic, &h0, h1.as_ref(), p, args.epsilon)?;

    println!("{}", serde_json::to_string_pretty(&rep)?);
    Ok(match rep.decision {
        Decision::SignalPresent => ExitCode::from(1),
        Decision::NoiseOnly => ExitCode::SUCCESS,
    })
}
