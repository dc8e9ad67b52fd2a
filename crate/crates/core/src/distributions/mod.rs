//! Special functions and samplers for normal summary statistics.
//!
//! The fractional F moments are evaluated entirely in log space so that
//! degrees of freedom near 1000 and moment orders near 500 stay finite.

mod beta;
mod gamma_fn;
mod moments;
mod sampling;

pub use beta::{f_cdf, f_quantile, ln_beta, regularized_incomplete_beta};
pub use gamma_fn::{ln_gamma, ln_gamma_ratio};
pub use moments::{f_moment_half, FMomentParams};
pub use sampling::{sample_f_ratio, sample_normal_mean, sample_variance};
