//! Generalized hypergeometric series pFq.

use crate::error::{Error, Result};

/// Hard cap on series length.
pub(crate) const MAX_TERMS: usize = 100_000;
/// Relative size at which the running term is considered converged.
pub(crate) const REL_TOL: f64 = 1e-15;

/// Outcome of a raw series evaluation.
pub(crate) struct SeriesSum {
    pub value: f64,
    /// Certified bound on the truncated tail, relative to |value|;
    /// zero when the stop rule fired naturally.
    pub tail_rel: f64,
}

/// Power-series evaluation of pFq(`[a]`; `[b]`; x):
/// Σ_m (∏(a_j)_m / ∏(b_j)_m) x^m / m!.
///
/// Terminates when the running term falls below `1e-15` of the partial sum or
/// at 10⁵ terms. A capped evaluation is accepted only when the geometric
/// majorant of the remaining tail is certifiably negligible; otherwise it is
/// a numerical failure. Near-unit arguments are therefore slow rather than
/// wrong.
pub fn hypergeometric_pfq(a: &[f64], b: &[f64], x: f64) -> Result<f64> {
    let s = pfq_series(a, b, x)?;
    if s.tail_rel > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "pFq series did not converge in {MAX_TERMS} terms at x = {x} \
             (certified tail {:.3e} of the sum)",
            s.tail_rel
        )));
    }
    Ok(s.value)
}

/// Like [`hypergeometric_pfq`] but completes a capped series with its
/// geometric tail estimate instead of failing. Used by density evaluators
/// whose quadrature nodes approach the support edge, where the argument is
/// within ~1e-6 of 1 and the density is about to vanish anyway.
pub(crate) fn pfq_tail_completed(a: &[f64], b: &[f64], x: f64) -> Result<f64> {
    let s = pfq_series(a, b, x)?;
    Ok(s.value)
}

fn pfq_series(a: &[f64], b: &[f64], x: f64) -> Result<SeriesSum> {
    for (j, &bj) in b.iter().enumerate() {
        if bj <= 0.0 && bj.fract() == 0.0 {
            return Err(Error::invalid_argument(format!(
                "lower parameter b[{j}] = {bj} is a non-positive integer (pole)"
            )));
        }
    }
    // a terminating series (some a_j a non-positive integer) converges for
    // any x; otherwise p = q + 1 has radius 1 and p > q + 1 diverges.
    let terminating = a.iter().any(|&aj| aj <= 0.0 && aj.fract() == 0.0);
    if !terminating {
        if a.len() == b.len() + 1 && x.abs() > 1.0 {
            return Err(Error::invalid_argument(format!(
                "series argument |x| = {} outside the unit disk of convergence",
                x.abs()
            )));
        }
        if a.len() > b.len() + 1 && x != 0.0 {
            return Err(Error::invalid_argument(
                "pFq with p > q + 1 diverges for nonzero argument",
            ));
        }
    }

    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut m = 0usize;
    while m < MAX_TERMS {
        let mut ratio = x / (m as f64 + 1.0);
        for &aj in a {
            ratio *= aj + m as f64;
        }
        for &bj in b {
            ratio /= bj + m as f64;
        }
        term *= ratio;
        if term == 0.0 {
            // terminating series exhausted
            return Ok(SeriesSum {
                value: sum,
                tail_rel: 0.0,
            });
        }
        sum += term;
        m += 1;
        if term.abs() < REL_TOL * sum.abs() {
            return Ok(SeriesSum {
                value: sum,
                tail_rel: 0.0,
            });
        }
        if !sum.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "pFq series overflowed after {m} terms at x = {x}"
            )));
        }
    }
    // Capped. For |x| < 1 the term ratios approach x, so the remaining tail
    // is bounded by the geometric series term * |x| / (1 - |x|).
    let q = x.abs();
    if q < 1.0 {
        let tail = term.abs() * q / (1.0 - q);
        Ok(SeriesSum {
            value: sum + tail_completion(term, x),
            tail_rel: tail / sum.abs().max(f64::MIN_POSITIVE),
        })
    } else {
        Err(Error::NumericalFailure(format!(
            "pFq series hit the {MAX_TERMS}-term cap at |x| = {q} >= 1"
        )))
    }
}

/// Geometric completion of a capped series: the terms past the cap are
/// within O(1/m) of a geometric sequence with ratio x.
fn tail_completion(last_term: f64, x: f64) -> f64 {
    last_term * x / (1.0 - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(hypergeometric_pfq(&[0.3, 2.0], &[1.5], 0.0).unwrap(), 1.0);
    }

    #[test]
    fn binomial_series_identity() {
        // 1F0(a;;x) = (1-x)^{-a}: at a=2, x=0.5 gives 4
        let v = hypergeometric_pfq(&[2.0], &[], 0.5).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn log_identity() {
        // 2F1(1,1;2;x) = -ln(1-x)/x at x = 0.5
        let v = hypergeometric_pfq(&[1.0, 1.0], &[2.0], 0.5).unwrap();
        let expect = -(0.5f64.ln()) / 0.5;
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        assert!((v - 1.386294).abs() < 1e-6);
    }

    #[test]
    fn exp_series() {
        // 0F0(;;x) = e^x
        let v = hypergeometric_pfq(&[], &[], 1.25).unwrap();
        assert!((v - 1.25f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn terminating_polynomial() {
        // 2F1(-2, 1; 1; x) = (1-x)^2 for any x
        let v = hypergeometric_pfq(&[-2.0, 1.0], &[1.0], 3.0).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pole_in_lower_parameter() {
        assert!(matches!(
            hypergeometric_pfq(&[1.0], &[-1.0], 0.1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rejects_outside_unit_disk() {
        assert!(hypergeometric_pfq(&[1.0, 1.0], &[2.0], 1.5).is_err());
    }

    #[test]
    fn near_unit_argument_converges_slowly_but_correctly() {
        // 2F1(1,1;2;x) = -ln(1-x)/x still holds at x = 0.999
        let x = 0.999;
        let v = hypergeometric_pfq(&[1.0, 1.0], &[2.0], x).unwrap();
        let expect = -((1.0 - x) as f64).ln() / x;
        assert!((v - expect).abs() < 1e-9 * expect, "{v} vs {expect}");
    }
}
