use rayon::prelude::*;

use super::stats::MetricValue;
use super::{with_pool, Cell, ChangepointDesign};
use crate::bootstrap::{bootstrap_ci, BootstrapConfig};
use crate::changepoint::{CorrectedEstimator, GroupSummary};
use crate::distributions::{sample_normal_mean, sample_variance};
use crate::rng::{derive_seed, stream, SimRng};
use crate::{Error, Result};

/// Distances from the interval limits to the true changepoint, as
/// percentages of |A|: `(100 (A − q_lo)/|A|, 100 (q_hi − A)/|A|)`.
///
/// Signed: a limit on the wrong side of A gives a negative width.
pub fn relative_widths(a_true: f64, q_lo: f64, q_hi: f64) -> Result<(f64, f64)> {
    if a_true == 0.0 {
        return Err(Error::UndefinedRelativeWidth);
    }
    let scale = 100.0 / a_true.abs();
    Ok(((a_true - q_lo) * scale, (q_hi - a_true) * scale))
}

/// Outcome of one simulated study in a design cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Repetition {
    pub a_hat: f64,
    /// Σ̂_k of the point estimate.
    pub sigma_series: f64,
    pub boot_median: f64,
    pub ci95: (f64, f64),
    pub ci90: (f64, f64),
    pub n_degenerate: usize,
}

/// Summary of one design cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMetrics {
    pub cell: Cell,
    pub a_true: f64,
    pub k: u32,
    /// Repetitions contributing to the metrics.
    pub n_used: usize,
    /// Repetitions dropped because the estimate was undefined.
    pub n_failed: usize,
    pub rel_bias_pct: MetricValue,
    /// Relative bias (%) of Σ̂_k against 1/(1 − α).
    pub sigma_rel_bias_pct: MetricValue,
    pub boot_median_rel_bias_pct: MetricValue,
    pub coverage95: MetricValue,
    pub coverage90: MetricValue,
    pub w_left_95: MetricValue,
    pub w_right_95: MetricValue,
    pub w_left_90: MetricValue,
    pub w_right_90: MetricValue,
}

fn draw_summary(mu: f64, sigma: f64, n: u32, rng: &mut SimRng) -> GroupSummary {
    GroupSummary {
        mean: sample_normal_mean(mu, sigma, n, rng),
        variance: sample_variance(sigma * sigma, n, rng),
        n,
    }
}

/// Simulate `m` studies in `cell`, each with a `b`-replicate bootstrap.
///
/// Repetition `j` draws its data from stream `(seed, [j, 0])` and seeds its
/// bootstrap with `derive_seed(seed, [j, 1])`. Entries are in repetition
/// order; `Err` marks a repetition whose estimate was undefined.
pub fn simulate_repetitions(cell: &Cell, m: usize, b: usize, seed: u64) -> Result<Vec<Result<Repetition>>> {
    cell.validate()?;
    let treatment = cell.treatment();
    let control = cell.control();
    let estimator = CorrectedEstimator::new(cell.n, cell.n, None)?;
    let reps = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(seed, &[j as u64, 0]);
            let t = draw_summary(treatment.mu, treatment.sigma, cell.n, &mut rng);
            let c = draw_summary(control.mu, control.sigma, cell.n, &mut rng);
            let point = estimator.estimate(t, c)?;
            let cfg = BootstrapConfig {
                k: Some(point.k),
                ..BootstrapConfig::new(b, derive_seed(seed, &[j as u64, 1]))
            };
            let boot = bootstrap_ci(t, c, &cfg)?;
            Ok(Repetition {
                a_hat: point.a_hat,
                sigma_series: point.sigma_series,
                boot_median: boot.median,
                ci95: boot.ci95,
                ci90: boot.ci90,
                n_degenerate: boot.n_degenerate,
            })
        })
        .collect();
    Ok(reps)
}

/// Aggregate repetitions of `cell` into bias, coverage and width metrics.
pub fn summarize_cell(cell: &Cell, reps: &[Result<Repetition>]) -> Result<CellMetrics> {
    let a_true = cell.true_a()?;
    let ok: Vec<&Repetition> = reps.iter().filter_map(|r| r.as_ref().ok()).collect();
    let n_failed = reps.len() - ok.len();
    let sigma = 1.0 / (1.0 - cell.alpha);
    let rel = |x: f64| 100.0 * (x - a_true) / a_true;
    let covers = |ci: (f64, f64)| if ci.0 <= a_true && a_true <= ci.1 { 1.0 } else { 0.0 };

    let collect = |f: &dyn Fn(&Repetition) -> f64| -> Vec<f64> { ok.iter().map(|r| f(r)).collect() };
    let widths95 = ok
        .iter()
        .map(|r| relative_widths(a_true, r.ci95.0, r.ci95.1))
        .collect::<Result<Vec<_>>>()?;
    let widths90 = ok
        .iter()
        .map(|r| relative_widths(a_true, r.ci90.0, r.ci90.1))
        .collect::<Result<Vec<_>>>()?;
    let left = |w: &[(f64, f64)]| MetricValue::from_samples(&w.iter().map(|x| x.0).collect::<Vec<_>>());
    let right = |w: &[(f64, f64)]| MetricValue::from_samples(&w.iter().map(|x| x.1).collect::<Vec<_>>());

    Ok(CellMetrics {
        cell: *cell,
        a_true,
        k: crate::changepoint::default_k(cell.n)?,
        n_used: ok.len(),
        n_failed,
        rel_bias_pct: MetricValue::from_samples(&collect(&|r| rel(r.a_hat))),
        sigma_rel_bias_pct: MetricValue::from_samples(&collect(&|r| 100.0 * (r.sigma_series - sigma) / sigma)),
        boot_median_rel_bias_pct: MetricValue::from_samples(&collect(&|r| rel(r.boot_median))),
        coverage95: MetricValue::from_samples(&collect(&|r| covers(r.ci95))),
        coverage90: MetricValue::from_samples(&collect(&|r| covers(r.ci90))),
        w_left_95: left(&widths95),
        w_right_95: right(&widths95),
        w_left_90: left(&widths90),
        w_right_90: right(&widths90),
    })
}

/// Metrics for one cell from `m` repetitions with `b` bootstrap replicates.
pub fn run_changepoint_cell(cell: &Cell, m: usize, b: usize, seed: u64) -> Result<CellMetrics> {
    let reps = simulate_repetitions(cell, m, b, seed)?;
    summarize_cell(cell, &reps)
}

/// Every cell of `d`, in [`ChangepointDesign::cells`] order. Cell `i` uses
/// seed `derive_seed(d.seed, [i])`.
pub fn run_full_grid(d: &ChangepointDesign, parallelism: usize) -> Result<Vec<CellMetrics>> {
    d.validate()?;
    let cells = d.cells();
    with_pool(parallelism, || {
        cells
            .par_iter()
            .enumerate()
            .map(|(i, cell)| run_changepoint_cell(cell, d.m, d.b, derive_seed(d.seed, &[i as u64])))
            .collect::<Result<Vec<_>>>()
    })?
}
