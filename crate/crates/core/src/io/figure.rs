//! Figure data as plain CSV: scatters, histograms, curves and time series.

use crate::error::{Error, Result};
use std::fs;
use std::path::Path;

/// The numeric payload behind one figure.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    /// Complex-plane scatter, (re, im) rows.
    Scatter(Vec<(f64, f64)>),
    /// Density histogram, (bin_left, bin_right, density) rows; bins must be
    /// contiguous and increasing, densities nonnegative.
    Histogram(Vec<(f64, f64, f64)>),
    /// A function graph, (x, y) rows.
    Curve(Vec<(f64, f64)>),
    /// A time series, (t, value) rows.
    Series(Vec<(f64, f64)>),
}

impl FigureData {
    fn header(&self) -> &'static str {
        match self {
            FigureData::Scatter(_) => "re,im",
            FigureData::Histogram(_) => "bin_left,bin_right,density",
            FigureData::Curve(_) => "x,y",
            FigureData::Series(_) => "t,value",
        }
    }

    fn validate(&self) -> Result<()> {
        if let FigureData::Histogram(rows) = self {
            for (k, row) in rows.iter().enumerate() {
                if !(row.0 < row.1) {
                    return Err(Error::invalid_argument(format!(
                        "histogram bin {k} is not increasing: [{}, {})",
                        row.0, row.1
                    )));
                }
                if row.2 < 0.0 {
                    return Err(Error::invalid_argument(format!(
                        "histogram bin {k} has negative density {}",
                        row.2
                    )));
                }
                if k > 0 && (rows[k - 1].1 - row.0).abs() > 1e-9 * row.1.abs().max(1.0) {
                    return Err(Error::invalid_argument(format!(
                        "histogram bins {k}-1 and {k} are not contiguous"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Writes figure data as CSV with a one-line typed header, rows in input
/// order.
pub fn emit_figure(data: &FigureData, path: &Path) -> Result<()> {
    data.validate()?;
    let mut out = String::from(data.header());
    out.push('\n');
    match data {
        FigureData::Scatter(rows) | FigureData::Curve(rows) | FigureData::Series(rows) => {
            for (a, b) in rows {
                out.push_str(&format!("{a},{b}\n"));
            }
        }
        FigureData::Histogram(rows) => {
            for (a, b, d) in rows {
                out.push_str(&format!("{a},{b},{d}\n"));
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Freedman–Diaconis bin count for a sample, clamped to [8, 512] with a
/// square-root fallback when the interquartile range collapses.
pub fn freedman_diaconis_bins(sorted: &[f64]) -> usize {
    let n = sorted.len();
    if n < 4 {
        return 8;
    }
    let q1 = sorted[n / 4];
    let q3 = sorted[3 * n / 4];
    let iqr = q3 - q1;
    let span = sorted[n - 1] - sorted[0];
    if iqr <= 0.0 || span <= 0.0 {
        return (n as f64).sqrt().ceil().clamp(8.0, 512.0) as usize;
    }
    let width = 2.0 * iqr / (n as f64).cbrt();
    ((span / width).ceil().clamp(8.0, 512.0)) as usize
}

/// Density histogram of `values` over [lo, hi) with `bins` equal bins.
/// Values outside the range are clamped into the edge bins so mass is
/// conserved. Total density·width sums to 1 for non-empty input.
pub fn histogram_density(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<FigureData> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::invalid_argument(
            "histogram needs bins >= 1 and hi > lo",
        ));
    }
    if values.is_empty() {
        return Err(Error::invalid_argument("histogram of an empty sample"));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / width).floor() as isize).clamp(0, bins as isize - 1) as usize;
        counts[k] += 1;
    }
    let norm = 1.0 / (values.len() as f64 * width);
    let rows = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            (
                lo + k as f64 * width,
                lo + (k + 1) as f64 * width,
                c as f64 * norm,
            )
        })
        .collect();
    Ok(FigureData::Histogram(rows))
}
