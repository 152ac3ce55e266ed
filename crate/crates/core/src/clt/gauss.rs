//! Gaussian tail utilities.

use crate::error::{Error, Result};
use std::f64::consts::SQRT_2;

/// Upper tail of the standard normal, Q(x) = P(Z > x), via the complementary
/// error function.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Inverse of [`q_function`] on (0, 1), by bisection (the function is
/// strictly decreasing) to better than 1e-10 in x.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "q_inverse needs a probability in (0, 1), got {p}"
        )));
    }
    // expand a bracket; Q(±40) under/overflows any representable p
    let mut lo = -40.0f64;
    let mut hi = 40.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q_function(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
