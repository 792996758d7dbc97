//! Accessible chart representations from one chart spec: an SVG chart with
//! color-vision simulation grids, generated alt text, a stereo sonification
//! and an emboss-ready tactile page.
//!
//! ```
//! use polyrep_core::{auto_alt, layout, parse_csv, ChartSpec};
//!
//! let spec = ChartSpec::parse(br#"{"data":{"csv":"x.csv"},"chart":{"type":"bar","x":"fruit"}}"#).unwrap();
//! let data = parse_csv(b"fruit\napple\npear\napple\n").unwrap();
//! let scene = layout(&spec, &data).unwrap();
//! let alt = auto_alt(&scene.summary).unwrap();
//! assert!(alt.flattened.starts_with("This is an untitled chart"));
//! ```

pub mod chart;
pub mod color;
pub mod data;
pub mod format;
pub mod pipeline;
pub mod render;
pub mod sonify;
pub mod stats;
pub mod tactile;
pub mod verbalize;

use thiserror::Error;

pub use chart::{ChartError, ChartSpec, ChartType, DataSource, Encodings};
pub use color::{
    audit_palette, delta_e, okabe_ito, simulate_cvd, AuditOptions, AuditReport, ColorError,
    CvdKind, Lab, Palette, Rgb,
};
pub use data::{parse_csv, serialize_csv, Column, ColumnKind, DataError, Dataset};
pub use pipeline::{alt_text, fitted_series, sound_series, FittedSeries};
pub use render::{cvd_grid, cvd_grid_scene, emit_svg, layout, RenderError, Scene};
pub use sonify::{
    read_wav, sonify, write_wav, AudioBuffer, SonifyConfig, SonifyError, SonifyMode, WavError,
};
pub use stats::{
    box_stats, histogram, linear_fit, nice_ticks, BoxStats, LinearFit, SortOrder, StatsError,
    TickSet,
};
pub use tactile::{
    check_page, emit_pdf, emit_preview_svg, tactualize, to_braille, BrailleCell, Paper,
    TactileError, TactileLayout, TactilePage,
};
pub use verbalize::{auto_alt, checklist_score, manual_alt, AltError, AltText, ChartSummary};

/// Any error from the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Alt(#[from] AltError),
    #[error(transparent)]
    Sonify(#[from] SonifyError),
    #[error(transparent)]
    Wav(#[from] WavError),
    #[error(transparent)]
    Tactile(#[from] TactileError),
    #[error("{0}")]
    Unsonifiable(String),
}
