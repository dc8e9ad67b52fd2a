//! Point and interval estimation of the changepoint at which stochastic
//! dominance between two location-scale distributions reverses.
//!
//! The crate is organised bottom-up:
//!
//! * [`distributions`] holds the special functions (log-gamma, fractional
//!   F moments, F CDF/quantile) and the samplers used for summary statistics.
//! * [`rng`] derives independent, reproducible random streams.
//! * [`changepoint`] classifies dominance between two groups and implements
//!   the plug-in and bias-corrected series estimators of the changepoint.
//! * [`bootstrap`] builds parametric-bootstrap percentile intervals.
//! * [`simulation`] runs the two simulation series and computes bias,
//!   coverage and relative-width metrics.
//! * [`report`] persists results (CSV, run manifest), parses design configs
//!   and renders small-multiple SVG figures.

pub mod bootstrap;
pub mod changepoint;
pub mod distributions;
mod error;
pub mod report;
pub mod rng;
pub mod simulation;

pub use error::{Error, Result};
