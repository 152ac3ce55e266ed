//! Snapshot capture files.
//!
//! Two formats:
//!
//! * `Iq32` — binary: a 16-byte header (magic `RMTC`, little-endian u32 N,
//!   u32 T, 4 reserved zero bytes) followed by row-major N×T interleaved
//!   little-endian f32 I/Q pairs. Files round-trip byte-exactly; loading
//!   quantizes doubles to f32 once, after which save/load is lossless.
//! * `Csv` — text: N rows of T cells `re+imj` (`1+2j`, `0.5-0.25j`, plain
//!   `1.5` for real entries), or N rows of 2T numeric cells of interleaved
//!   re,im pairs. Detected per file by the presence of `j`.

use crate::error::{Error, Result};
use crate::rmt::SnapshotMatrix;
use crate::C64;
use faer::Mat;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Leading bytes of an Iq32 capture.
pub const IQ32_MAGIC: &[u8; 4] = b"RMTC";

const HEADER_LEN: usize = 16;

/// On-disk encodings of a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaptureFormat {
    Iq32,
    Csv,
}

/// Reads a capture. `declared_dims`, when given, is checked against what the
/// file actually holds.
pub fn load_capture(
    path: &Path,
    format: CaptureFormat,
    declared_dims: Option<(usize, usize)>,
) -> Result<SnapshotMatrix> {
    let snap = match format {
        CaptureFormat::Iq32 => load_iq32(path)?,
        CaptureFormat::Csv => load_csv(path)?,
    };
    if let Some((n, t)) = declared_dims {
        if snap.nrows() != n || snap.ncols() != t {
            return Err(Error::DimMismatch(format!(
                "declared {n}x{t}, file holds {}x{}",
                snap.nrows(),
                snap.ncols()
            )));
        }
    }
    Ok(snap)
}

/// Writes a capture in the requested format.
pub fn save_capture(path: &Path, format: CaptureFormat, snap: &SnapshotMatrix) -> Result<()> {
    match format {
        CaptureFormat::Iq32 => save_iq32(path, snap),
        CaptureFormat::Csv => save_csv(path, snap),
    }
}

fn load_iq32(path: &Path) -> Result<SnapshotMatrix> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format {
            offset: bytes.len() as u64,
            message: format!("file too short for the {HEADER_LEN}-byte header"),
        });
    }
    if &bytes[0..4] != IQ32_MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: format!(
                "bad magic {:?}, expected {:?}",
                &bytes[0..4],
                IQ32_MAGIC
            ),
        });
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let t = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if n == 0 || t == 0 {
        return Err(Error::Format {
            offset: 4,
            message: format!("degenerate dimensions {n}x{t} in header"),
        });
    }
    let expected = HEADER_LEN + n * t * 8;
    if bytes.len() != expected {
        return Err(Error::Format {
            offset: bytes.len().min(expected) as u64,
            message: format!(
                "payload length mismatch: expected {expected} bytes for {n}x{t}, got {}",
                bytes.len()
            ),
        });
    }
    let mut m = Mat::<C64>::zeros(n, t);
    for i in 0..n {
        for j in 0..t {
            let off = HEADER_LEN + (i * t + j) * 8;
            let re = f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
            let im = f32::from_le_bytes(bytes[off + 4..off + 8].try_into().unwrap());
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Format {
                    offset: off as u64,
                    message: format!("non-finite sample at row {i}, col {j}"),
                });
            }
            m[(i, j)] = C64::new(re as f64, im as f64);
        }
    }
    Ok(SnapshotMatrix::from_mat_unchecked(m))
}

fn save_iq32(path: &Path, snap: &SnapshotMatrix) -> Result<()> {
    let (n, t) = (snap.nrows(), snap.ncols());
    let mut out = Vec::with_capacity(HEADER_LEN + n * t * 8);
    out.extend_from_slice(IQ32_MAGIC);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(t as u32).to_le_bytes());
    out.extend_from_slice(&[0u8; 4]);
    for i in 0..n {
        for j in 0..t {
            let z = snap.entry(i, j);
            out.extend_from_slice(&(z.re as f32).to_le_bytes());
            out.extend_from_slice(&(z.im as f32).to_le_bytes());
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&out)?;
    Ok(())
}

/// Parses one complex literal: `a+bj`, `a-bj`, `bj`, or a bare real.
fn parse_complex(cell: &str) -> Option<C64> {
    let s = cell.trim();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix(['j', 'i']) {
        // find the sign splitting real and imaginary parts, skipping a
        // leading sign and exponent signs
        let b = body.as_bytes();
        let mut split = None;
        for k in (1..b.len()).rev() {
            if (b[k] == b'+' || b[k] == b'-') && !matches!(b[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().ok()?;
                let im_str = &body[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().ok()?
                };
                Some(C64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else {
                    body.parse().ok()?
                };
                Some(C64::new(0.0, im))
            }
        }
    } else {
        s.parse::<f64>().ok().map(|re| C64::new(re, 0.0))
    }
}

fn load_csv(path: &Path) -> Result<SnapshotMatrix> {
    let text = fs::read_to_string(path)?;
    let complex_literals = text.contains('j') || text.contains('i');
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let row: Vec<C64> = if complex_literals {
            cells
                .iter()
                .map(|c| {
                    parse_complex(c).ok_or_else(|| Error::Format {
                        offset: lineno as u64,
                        message: format!("line {}: unparsable cell {c:?}", lineno + 1),
                    })
                })
                .collect::<Result<_>>()?
        } else {
            if cells.len() % 2 != 0 {
                return Err(Error::Format {
                    offset: lineno as u64,
                    message: format!(
                        "line {}: odd cell count {} for re,im pairs",
                        lineno + 1,
                        cells.len()
                    ),
                });
            }
            cells
                .chunks(2)
                .map(|pair| {
                    let re: f64 = pair[0].trim().parse().map_err(|_| Error::Format {
                        offset: lineno as u64,
                        message: format!("line {}: bad real part {:?}", lineno + 1, pair[0]),
                    })?;
                    let im: f64 = pair[1].trim().parse().map_err(|_| Error::Format {
                        offset: lineno as u64,
                        message: format!("line {}: bad imaginary part {:?}", lineno + 1, pair[1]),
                    })?;
                    Ok(C64::new(re, im))
                })
                .collect::<Result<_>>()?
        };
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Format {
                    offset: lineno as u64,
                    message: format!(
                        "line {}: ragged row ({} cells, expected {})",
                        lineno + 1,
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format {
            offset: 0,
            message: "empty capture".into(),
        });
    }
    let (n, t) = (rows.len(), rows[0].len());
    Ok(SnapshotMatrix::from_mat_unchecked(Mat::from_fn(
        n,
        t,
        |i, j| rows[i][j],
    )))
}

fn save_csv(path: &Path, snap: &SnapshotMatrix) -> Result<()> {
    let mut out = String::new();
    for i in 0..snap.nrows() {
        for j in 0..snap.ncols() {
            if j > 0 {
                out.push(',');
            }
            let z = snap.entry(i, j);
            if z.im >= 0.0 {
                out.push_str(&format!("{:?}+{:?}j", z.re, z.im));
            } else {
                out.push_str(&format!("{:?}{:?}j", z.re, z.im));
            }
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}
