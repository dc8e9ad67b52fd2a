//! Result files, design configs, run manifests and figures.

mod config;
mod manifest;
mod rows;
mod svg;

pub use config::{parse_config, DesignConfig};
pub use manifest::{config_hash, FailedCell, RunManifest};
pub use rows::{read_csv, rows_from_cells, rows_from_sigma, write_csv, Metric, ResultRow, Series, COLUMNS};
pub use svg::{render_figures, Appendix, Figure, PanelSpec, RefLine, FIG1_ALPHAS, FIG1_NS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("missing columns: {}", .0.join(", "))]
    MissingColumns(Vec<String>),

    #[error("missing metrics for this figure: {}", .0.join(", "))]
    MissingMetrics(Vec<String>),

    #[error("no data rows")]
    NoData,

    #[error(transparent)]
    Core(#[from] crate::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
