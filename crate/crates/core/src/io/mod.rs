//! Capture-file ingestion and figure-data emission.

mod capture;
mod figure;

pub use capture::{load_capture, save_capture, CaptureFormat, IQ32_MAGIC};
pub use figure::{emit_figure, freedman_diaconis_bins, histogram_density, FigureData};
