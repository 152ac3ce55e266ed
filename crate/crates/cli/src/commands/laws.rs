//! `rmtsense laws` — tabulate theoretical densities as curve files.

use super::ensure_dir;
use crate::OutDir;
use anyhow::{bail, Result};
use rmtsense_core::laws::{mp_edges, RingLawParams};
use rmtsense_core::{
    emit_figure, ginibre_product_pdf, ginibre_product_pdf_k2, mp_pdf, ring_radial_cdf,
    ring_radial_pdf, FigureData,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(clap::Args)]
#[group(id = "law", required = true, multiple = false)]
pub struct LawsArgs {
    /// Ring-law radial density for (c, L).
    #[arg(long, group = "law")]
    ring: bool,
    /// Ring-law radial CDF for (c, L).
    #[arg(long, group = "law")]
    ring_cdf: bool,
    /// Marchenko-Pastur density (c = n/p >= 1 convention).
    #[arg(long, group = "law")]
    mp: bool,
    /// Ginibre-product density rho^(k).
    #[arg(long, group = "law")]
    ginibre: bool,
    /// Closed-form Ginibre-product density for k = 2.
    #[arg(long, group = "law")]
    ginibre_k2: bool,

    /// Ratio parameter: N/T in (0,1] for ring laws, n/p >= 1 for MP.
    #[arg(long, short = 'c', default_value_t = 0.5)]
    c: f64,
    /// Factor count L (ring) or k (Ginibre).
    #[arg(short = 'L', long, default_value_t = 5)]
    l: usize,
    /// Number of tabulation points.
    #[arg(long, default_value_t = 211)]
    points: usize,
    /// Output file (default: `<out-dir>/law_<name>.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    out_dir: OutDir,
}

type LawFn = Box<dyn Fn(f64) -> Result<f64>>;

pub fn run(args: &LawsArgs) -> Result<ExitCode> {
    if args.points < 2 {
        bail!("--points must be at least 2");
    }
    let (name, lo, hi, f): (&str, f64, f64, LawFn) = if args.ring {
        let p = RingLawParams::new(args.c, args.l)?;
        ("ring", 0.0, 1.05, Box::new(move |r| Ok(ring_radial_pdf(r, p))))
    } else if args.ring_cdf {
        let p = RingLawParams::new(args.c, args.l)?;
        ("ring_cdf", 0.0, 1.05, Box::new(move |r| Ok(ring_radial_cdf(r, p))))
    } else if args.mp {
        let (a, b) = mp_edges(args.c);
        let c = args.c;
        (
            "mp",
            (a - 0.25).max(0.0),
            b + 0.25,
            Box::new(move |x| Ok(mp_pdf(x, c)?)),
        )
    } else if args.ginibre {
        let k = args.l;
        let hi = (k as f64 + 1.0).powi(k as i32 + 1) / (k as f64).powi(k as i32);
        (
            "ginibre",
            0.0,
            hi,
            Box::new(move |x| Ok(ginibre_product_pdf(x, k)?)),
        )
    } else {
        ("ginibre_k2", 0.0, 27.0 / 4.0, Box::new(|x| Ok(ginibre_product_pdf_k2(x))))
    };

    let mut rows = Vec::with_capacity(args.points);
    for i in 0..args.points {
        let x = lo + (hi - lo) * i as f64 / (args.points - 1) as f64;
        let y = f(x)?;
        // the x -> 0 boundary of the Ginibre densities is an integrable
        // singularity; keep curve files finite
        if y.is_finite() {
            rows.push((x, y));
        }
    }

    let path = match &args.out {
        Some(p) => p.clone(),
        None => {
            let dir = args.out_dir.resolve();
            ensure_dir(&dir)?;
            dir.join(format!("law_{name}.csv"))
        }
    };
    emit_figure(&FigureData::Curve(rows), &path)?;
    eprintln!("laws: wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}
