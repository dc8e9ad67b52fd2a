//! The two simulation series: convergence of Σ̂_k in k, and bias, coverage
//! and interval width of the changepoint estimators over a design grid.
//!
//! All work is keyed by index paths into [`crate::rng`], and results are
//! gathered in index order, so output is identical for any thread count.

mod design;
mod grid;
mod sigma;
mod stats;

pub use design::{Cell, ChangepointDesign, SigmaSeriesDesign, FIG1_K_GRID};
pub use grid::{
    relative_widths, run_changepoint_cell, run_full_grid, simulate_repetitions, summarize_cell, CellMetrics, Repetition,
};
pub use sigma::{run_sigma_series, SigmaSeriesRow};
pub use stats::MetricValue;

use crate::{Error, Result};

/// Run `f` on a dedicated pool of `parallelism` worker threads.
pub(crate) fn with_pool<T: Send>(parallelism: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if parallelism == 0 {
        return Err(Error::invalid("parallelism", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::invalid("parallelism", e.to_string()))?;
    Ok(pool.install(f))
}
