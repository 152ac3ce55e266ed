//! Random-matrix spectrum sensing toolkit.
//!
//! The crate has four layers:
//!
//! * [`rmt`] — complex snapshot matrices, sample covariance, eigensolvers and
//!   the snapshot-combination pipelines (product, geometric mean, arithmetic
//!   mean) built on singular-value-equivalent square factors.
//! * [`laws`] — closed-form spectral laws: the ring law radial density/CDF,
//!   Marchenko–Pastur, and the Ginibre-product densities with their
//!   hypergeometric machinery.
//! * [`clt`] — the central limit theorem of linear spectral statistics for
//!   spiked sample covariance matrices: closed forms for the likelihood-ratio
//!   statistic as well as a generic quadrature for arbitrary analytic test
//!   functions, plus Gaussian tail utilities.
//! * [`detect`] / [`sensing`] — turning spectra into decisions (thresholds,
//!   error probabilities, ring statistics) and simulating the distributed
//!   streaming detection network (signal sources, acquisition models, server
//!   plus coordinator rounds).
//!
//! File ingestion and figure-data emission live in [`io`].
//!
//! All randomized operations take either an explicit `seed` or a caller-owned
//! RNG, and are bit-reproducible for a fixed seed on a given platform.
//!
//! # Example
//!
//! ```
//! use rmtsense_core::*;
//!
//! // one H0 capture: 32 antennas, 96 samples, unit white noise
//! let x = gen_spiked_samples(32, 96, &SpikeModel::none(), 7)?;
//! let server = server_compute(0, &x)?;
//!
//! // calibrate the threshold from the CLT of the statistic and decide
//! let h0 = lrt_clt_closed(96.0 / 32.0, &SpikeModel::none())?;
//! let rep = report(server.statistic, &h0, None, 32, 0.05)?;
//! assert_eq!(rep.decision, Decision::NoiseOnly);
//! assert!((rep.predicted_pfa - 0.05).abs() < 1e-6);
//! # Ok::<(), Error>(())
//! ```

pub mod clt;
pub mod detect;
pub mod error;
pub mod io;
pub mod laws;
pub mod rmt;
pub mod sensing;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

pub use clt::{clt_quadrature, f_lrt, lrt_clt_closed, q_function, q_inverse, z0_of_spike};
pub use clt::{AnalyticFn, CltParams, SpikeModel};
pub use detect::{
    decide, error_probabilities, inner_radius_estimate, inside_ring_count, lrt_statistic, report,
    shrink_ratio, threshold, Decision, DetectionReport, RingStats, THRESHOLD_RULE,
};
pub use io::{
    emit_figure, freedman_diaconis_bins, histogram_density, load_capture, save_capture,
    CaptureFormat, FigureData,
};
pub use laws::{
    ginibre_product_pdf, ginibre_product_pdf_k2, hypergeometric_pfq, lambda_coeff, mp_pdf,
    ring_inner_radius, ring_radial_cdf, ring_radial_pdf, GinibreProductParams, RingLawParams,
};
pub use rmt::{
    arithmetic_mean_spectrum, eigenvalues_general, eigenvalues_hermitian, gen_ginibre,
    geometric_mean_spectrum, ginibre_product_spectrum, product_chain, sample_covariance,
    standardize_rows, sve_transform, AcquisitionMode, ChainOptions, ComplexSpectrum,
    HermitianMatrix, PipelineTag, SnapshotEnsemble, SnapshotMatrix,
};
pub use sensing::{
    acquire, coordinate, gen_ar_signal, gen_spiked_samples, mobility_track, run_distributed,
    server_compute, CoordinatorResult, ScenarioConfig, ServerResult, SourceKind, SourceSpec,
};
