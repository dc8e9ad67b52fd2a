//! Parametric-bootstrap percentile intervals for the changepoint.
//!
//! Each replicate redraws both arms' summary statistics from the sampling
//! distributions implied by the observed ones,
//!
//! ```text
//! x̄ᵢ* ~ N(x̄ᵢ, sᵢ²/nᵢ),   sᵢ²* ~ sᵢ² χ²_{nᵢ−1} / (nᵢ − 1)
//! ```
//!
//! and re-runs the series estimator on the starred summaries. Replicate `i`
//! draws from stream `(seed, [i])`, so the result does not depend on the
//! number of worker threads.

use rand::Rng;
use rayon::prelude::*;

use crate::changepoint::{default_k, CorrectedEstimator, GroupSummary};
use crate::distributions::{sample_normal_mean, sample_variance};
use crate::rng::stream;
use crate::{Error, Result};

/// Quantiles reported by default: both 95% and 90% limits and the median.
pub const DEFAULT_PROBS: [f64; 5] = [0.025, 0.05, 0.5, 0.95, 0.975];

/// Number of replicates used in the reference simulation design.
pub const DEFAULT_B: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub b: usize,
    /// Strictly increasing probabilities in (0, 1).
    pub probs: Vec<f64>,
    /// Series truncation; `None` uses the default for the point estimate.
    pub k: Option<u32>,
    pub seed: u64,
}

impl BootstrapConfig {
    pub fn new(b: usize, seed: u64) -> Self {
        Self {
            b,
            probs: DEFAULT_PROBS.to_vec(),
            k: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 2 {
            return Err(Error::invalid(
                "b",
                format!("need at least 2 replicates, got {}", self.b),
            ));
        }
        if self.probs.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
            return Err(Error::invalid("probs", "every probability must lie in (0, 1)"));
        }
        if self.probs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("probs", "probabilities must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    /// `(p, quantile)` for each requested probability, in order.
    pub quantiles: Vec<(f64, f64)>,
    pub median: f64,
    pub ci95: (f64, f64),
    pub ci90: (f64, f64),
    /// Replicates dropped because the starred SDs tied or the estimate was
    /// not finite.
    pub n_degenerate: usize,
    /// Series truncation used for the replicates.
    pub k: u32,
    sorted: Vec<f64>,
}

impl BootstrapResult {
    /// Equal-tailed percentile interval at confidence `level`.
    pub fn interval(&self, level: f64) -> Result<(f64, f64)> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::invalid("level", format!("must lie in (0, 1), got {level}")));
        }
        // Rounded so that e.g. level 0.95 hits p = 0.025 exactly.
        let tail = (0.5 * (1.0 - level) * 1e12).round() / 1e12;
        Ok((
            empirical_quantile(&self.sorted, tail)?,
            empirical_quantile(&self.sorted, 1.0 - tail)?,
        ))
    }

    /// The retained replicate estimates, sorted ascending.
    pub fn replicates(&self) -> &[f64] {
        &self.sorted
    }
}

/// One replicate Â_k* for the two observed summaries.
pub fn bootstrap_replicate<R: Rng + ?Sized>(t1: GroupSummary, t2: GroupSummary, k: u32, rng: &mut R) -> Result<f64> {
    let estimator = CorrectedEstimator::capped(t1.n, t2.n, k)?;
    replicate_with(&estimator, t1, t2, rng)
}

fn redraw<R: Rng + ?Sized>(t: GroupSummary, rng: &mut R) -> GroupSummary {
    GroupSummary {
        mean: sample_normal_mean(t.mean, t.sd(), t.n, rng),
        variance: sample_variance(t.variance, t.n, rng),
        n: t.n,
    }
}

pub(crate) fn replicate_with<R: Rng + ?Sized>(
    estimator: &CorrectedEstimator,
    t1: GroupSummary,
    t2: GroupSummary,
    rng: &mut R,
) -> Result<f64> {
    let s1 = redraw(t1, rng);
    let s2 = redraw(t2, rng);
    let a = estimator.estimate(s1, s2)?.a_hat;
    if a.is_finite() {
        Ok(a)
    } else {
        Err(Error::DegenerateRatio)
    }
}

/// Series truncation for the point estimate: the configured `k`, else
/// [`default_k`] of the arm with the larger sample SD.
fn point_k(t1: GroupSummary, t2: GroupSummary, k: Option<u32>) -> Result<u32> {
    match k {
        Some(k) => Ok(k),
        None => {
            let n_large = if t1.variance > t2.variance { t1.n } else { t2.n };
            default_k(n_large)
        }
    }
}

/// Percentile bootstrap for the changepoint from two observed summaries.
pub fn bootstrap_ci(t1: GroupSummary, t2: GroupSummary, cfg: &BootstrapConfig) -> Result<BootstrapResult> {
    cfg.validate()?;
    let k = point_k(t1, t2, cfg.k)?;
    let estimator = CorrectedEstimator::capped(t1.n, t2.n, k)?;
    let draws: Vec<Result<f64>> = (0..cfg.b)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(cfg.seed, &[i as u64]);
            replicate_with(&estimator, t1, t2, &mut rng)
        })
        .collect();

    let mut sorted = Vec::with_capacity(cfg.b);
    let mut n_degenerate = 0;
    for d in draws {
        match d {
            Ok(a) => sorted.push(a),
            Err(Error::DegenerateRatio) => n_degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    if sorted.is_empty() {
        return Err(Error::AllReplicatesDegenerate { b: cfg.b });
    }
    sorted.sort_by(f64::total_cmp);

    let quantiles = cfg
        .probs
        .iter()
        .map(|&p| empirical_quantile(&sorted, p).map(|q| (p, q)))
        .collect::<Result<Vec<_>>>()?;
    let q = |p| empirical_quantile(&sorted, p);
    Ok(BootstrapResult {
        median: q(0.5)?,
        ci95: (q(0.025)?, q(0.975)?),
        ci90: (q(0.05)?, q(0.95)?),
        quantiles,
        n_degenerate,
        k,
        sorted,
    })
}

/// Sample quantile by linear interpolation between order statistics
/// (h = (N − 1)p + 1, the usual "type 7" rule).
pub fn empirical_quantile(sorted_values: &[f64], p: f64) -> Result<f64> {
    if sorted_values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("must lie in [0, 1], got {p}")));
    }
    let h = (sorted_values.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let v_lo = sorted_values[lo];
    match sorted_values.get(lo + 1) {
        Some(&v_hi) if frac > 0.0 => Ok(v_lo + frac * (v_hi - v_lo)),
        _ => Ok(v_lo),
    }
}
