use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::rows::Series;
use crate::simulation::CellMetrics;

/// Written next to each result CSV. Contains nothing run-specific beyond
/// its inputs, so reruns produce identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub series: Series,
    pub seed: u64,
    /// SHA-256 of the config file bytes, hex.
    pub config_sha256: String,
    pub rows: usize,
    pub failed_repetitions: usize,
    /// Cells with at least one excluded repetition.
    pub failed_cells: Vec<FailedCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedCell {
    pub n: u32,
    pub delta: f64,
    pub sigma_c: f64,
    pub alpha: f64,
    pub n_failed: usize,
}

impl RunManifest {
    pub fn new(series: Series, seed: u64, config_text: &str, rows: usize) -> Self {
        Self {
            tool: "dominance".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            series,
            seed,
            config_sha256: config_hash(config_text),
            rows,
            failed_repetitions: 0,
            failed_cells: Vec::new(),
        }
    }

    pub fn with_failures(mut self, cells: &[CellMetrics]) -> Self {
        self.failed_cells = cells
            .iter()
            .filter(|c| c.n_failed > 0)
            .map(|c| FailedCell {
                n: c.cell.n,
                delta: c.cell.delta,
                sigma_c: c.cell.sigma_c,
                alpha: c.cell.alpha,
                n_failed: c.n_failed,
            })
            .collect();
        self.failed_repetitions = cells.iter().map(|c| c.n_failed).sum();
        self
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n")
    }
}

pub fn config_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
