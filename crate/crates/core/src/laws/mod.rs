//! Closed-form spectral laws.
//!
//! The ring law describes eigenvalue moduli of products of L square factors
//! built from N×T noise captures (convention here: c = N/T ≤ 1). The
//! Marchenko–Pastur density and the Ginibre-product densities use the
//! covariance-side convention c = n/p ≥ 1, matching the CLT module. The two
//! conventions are deliberately kept on separate types; nothing converts
//! implicitly between them.

mod ginibre;
pub(crate) mod hypergeom;

pub use ginibre::{
    ginibre_product_cdf, ginibre_product_mass, ginibre_product_pdf, ginibre_product_pdf_k2,
    lambda_coeff, GinibreProductParams,
};
pub use hypergeom::hypergeometric_pfq;

use crate::error::{Error, Result};

/// Parameters of the ring law: per-snapshot ratio c = N/T ∈ (0, 1] and the
/// number of factors L ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RingLawParams {
    pub c: f64,
    pub l: usize,
}

impl RingLawParams {
    pub fn new(c: f64, l: usize) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::invalid_argument(format!(
                "ring law needs c in (0, 1], got {c}"
            )));
        }
        if l == 0 {
            return Err(Error::invalid_argument("ring law needs L >= 1"));
        }
        Ok(Self { c, l })
    }
}

/// Inner radius of the ring law, (1 − c)^{L/2}.
pub fn ring_inner_radius(params: RingLawParams) -> f64 {
    (1.0 - params.c).powf(params.l as f64 / 2.0)
}

/// Radial density of eigenvalue moduli under the ring law:
/// (2/(cL))·r^{2/L − 1} on [(1−c)^{L/2}, 1], zero elsewhere.
pub fn ring_radial_pdf(r: f64, params: RingLawParams) -> f64 {
    let l = params.l as f64;
    let inner = ring_inner_radius(params);
    if r < inner || r > 1.0 {
        return 0.0;
    }
    2.0 / (params.c * l) * r.powf(2.0 / l - 1.0)
}

/// CDF of the radial law: clamp((r^{2/L} − (1−c))/c, 0, 1).
pub fn ring_radial_cdf(r: f64, params: RingLawParams) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let l = params.l as f64;
    ((r.powf(2.0 / l) - (1.0 - params.c)) / params.c).clamp(0.0, 1.0)
}

/// Marchenko–Pastur density in the c = n/p ≥ 1 convention: the limiting
/// spectrum of (1/p)·XXᴴ for a p×n matrix of unit-variance entries, supported
/// on [(1−√c)², (1+√c)²].
///
/// The reciprocal (c < 1) convention is intentionally not served here.
pub fn mp_pdf(x: f64, c: f64) -> Result<f64> {
    if c < 1.0 {
        return Err(Error::UnsupportedConvention(format!(
            "mp_pdf uses the c = n/p >= 1 convention, got c = {c}"
        )));
    }
    let (a, b) = mp_edges(c);
    if x <= a || x >= b {
        return Ok(0.0);
    }
    Ok(((b - x) * (x - a)).sqrt() / (2.0 * std::f64::consts::PI * x))
}

/// Support edges a = (1−√c)², b = (1+√c)².
pub fn mp_edges(c: f64) -> (f64, f64) {
    let s = c.sqrt();
    ((1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s))
}
