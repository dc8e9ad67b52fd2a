//! Dominance classification, the true changepoint, and its estimators.
//!
//! For two members of a location-scale family with scales σ₁ ≠ σ₂ the
//! survival functions cross exactly once, at the equal-z-score point
//!
//! ```text
//! A = μ₂ + (μ₁ − μ₂) / (1 − σ₁/σ₂)
//! ```
//!
//! The group with the larger scale is stochastically larger on {x ≥ A} and
//! smaller on {x < A}.
//!
//! From normal summary statistics, the plug-in estimate replaces μ, σ by
//! x̄, s. It has no finite expectation, so the factor 1/(1 − s₁/s₂) is
//! replaced by the truncated series
//!
//! ```text
//! Σ̂_k = Σ_{j=0..k} (s₁/s₂)^j / M_{j/2}(F_{n₁−1, n₂−1})
//! ```
//!
//! each term of which is an unbiased estimate of (σ₁/σ₂)^j.

use crate::distributions::FMomentParams;
use crate::{Error, Result};

/// Largest series truncation used by [`default_k`].
pub const K_CAP: u32 = 500;

/// True location and scale of one group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupParams {
    pub mu: f64,
    pub sigma: f64,
}

impl GroupParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::invalid("mu", format!("must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(
                "sigma",
                format!("must be positive and finite, got {sigma}"),
            ));
        }
        Ok(Self { mu, sigma })
    }
}

/// Observed summary statistics of one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupSummary {
    pub mean: f64,
    /// Sample variance s².
    pub variance: f64,
    pub n: u32,
}

impl GroupSummary {
    pub fn new(mean: f64, variance: f64, n: u32) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::invalid("mean", format!("must be finite, got {mean}")));
        }
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::invalid(
                "variance",
                format!("must be positive and finite, got {variance}"),
            ));
        }
        if n < 2 {
            return Err(Error::invalid("n", format!("must be at least 2, got {n}")));
        }
        Ok(Self { mean, variance, n })
    }

    /// Summary from a mean and a standard deviation.
    pub fn from_sd(mean: f64, sd: f64, n: u32) -> Result<Self> {
        Self::new(mean, sd * sd, n)
    }

    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// One of the two input groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    Group1,
    Group2,
}

impl Arm {
    pub fn other(self) -> Self {
        match self {
            Arm::Group1 => Arm::Group2,
            Arm::Group2 => Arm::Group1,
        }
    }
}

/// Which of the three dominance situations holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceKind {
    FullDominance,
    CrossingAt,
}

/// Stochastic ordering of two location-scale distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DominanceResult {
    /// Equal locations and scales: the distributions coincide.
    Identical,
    /// Equal scales: `larger` is stochastically larger everywhere.
    Full { larger: Arm },
    /// Unequal scales: `larger_above` is stochastically larger on
    /// {x ≥ changepoint} and smaller below it.
    Crossing { changepoint: f64, larger_above: Arm },
}

impl DominanceResult {
    pub fn kind(&self) -> DominanceKind {
        match self {
            DominanceResult::Identical | DominanceResult::Full { .. } => DominanceKind::FullDominance,
            DominanceResult::Crossing { .. } => DominanceKind::CrossingAt,
        }
    }

    pub fn changepoint(&self) -> Option<f64> {
        match *self {
            DominanceResult::Crossing { changepoint, .. } => Some(changepoint),
            _ => None,
        }
    }

    pub fn is_identical(&self) -> bool {
        matches!(self, DominanceResult::Identical)
    }
}

/// Classify the ordering of X₁ ~ F(·; μ₁, σ₁) and X₂ ~ F(·; μ₂, σ₂).
pub fn classify_dominance(g1: GroupParams, g2: GroupParams) -> DominanceResult {
    if g1.sigma == g2.sigma {
        return if g1.mu == g2.mu {
            DominanceResult::Identical
        } else if g1.mu < g2.mu {
            DominanceResult::Full { larger: Arm::Group2 }
        } else {
            DominanceResult::Full { larger: Arm::Group1 }
        };
    }
    let changepoint = crossing_point(g1.mu, g1.sigma, g2.mu, g2.sigma);
    let larger_above = if g1.sigma > g2.sigma { Arm::Group1 } else { Arm::Group2 };
    DominanceResult::Crossing {
        changepoint,
        larger_above,
    }
}

/// The changepoint A for σ₁ ≠ σ₂.
pub fn true_changepoint(g1: GroupParams, g2: GroupParams) -> Result<f64> {
    if g1.sigma == g2.sigma {
        return Err(Error::NoChangepoint);
    }
    Ok(crossing_point(g1.mu, g1.sigma, g2.mu, g2.sigma))
}

fn crossing_point(mu1: f64, s1: f64, mu2: f64, s2: f64) -> f64 {
    mu2 + (mu1 - mu2) / (1.0 - s1 / s2)
}

/// Which input arm was placed in the role of subscript 2 (the arm with the
/// larger sample SD).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Inputs used as given: arm 2 has the larger sample SD.
    AsGiven,
    /// Inputs interchanged: arm 1 has the larger sample SD.
    Swapped,
}

impl Orientation {
    /// The input arm acting as subscript 2.
    pub fn larger_sd_arm(self) -> Arm {
        match self {
            Orientation::AsGiven => Arm::Group2,
            Orientation::Swapped => Arm::Group1,
        }
    }
}

fn orient(t1: GroupSummary, t2: GroupSummary) -> Result<(GroupSummary, GroupSummary, Orientation)> {
    if t1.variance < t2.variance {
        Ok((t1, t2, Orientation::AsGiven))
    } else if t1.variance > t2.variance {
        Ok((t2, t1, Orientation::Swapped))
    } else {
        Err(Error::DegenerateRatio)
    }
}

/// Plug-in estimate x̄₂ + (x̄₁ − x̄₂)/(1 − s₁/s₂), arms ordered so s₁ < s₂.
pub fn plug_in_estimate(t1: GroupSummary, t2: GroupSummary) -> Result<f64> {
    let (a, b, _) = orient(t1, t2)?;
    Ok(b.mean + (a.mean - b.mean) / (1.0 - a.sd() / b.sd()))
}

/// Series truncation min(n₂ − 2, 500).
pub fn default_k(n2: u32) -> Result<u32> {
    if n2 < 3 {
        return Err(Error::InsufficientData { n: n2 });
    }
    Ok((n2 - 2).min(K_CAP))
}

/// Precomputed ln(1/M_{j/2}) for j = 0..=k at fixed arm sizes.
///
/// Building the table costs k log-gamma ratios; evaluating Σ̂_k for a new
/// SD ratio then costs k + 1 exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    n1: u32,
    n2: u32,
    ln_inv_moment: Vec<f64>,
}

impl SeriesTable {
    /// Table for arm sizes `n1`, `n2` (n₂ is the arm in the denominator of the
    /// SD ratio) and truncation `k ≤ n₂ − 2`.
    pub fn new(n1: u32, n2: u32, k: u32) -> Result<Self> {
        if n1 < 2 {
            return Err(Error::invalid("n1", format!("must be at least 2, got {n1}")));
        }
        if n2 < 2 {
            return Err(Error::invalid("n2", format!("must be at least 2, got {n2}")));
        }
        if k > n2 - 2 {
            return Err(Error::TruncationBound { k, max: n2 - 2 });
        }
        let ln_inv_moment = (0..=k)
            .map(|j| FMomentParams::for_arms(j, n1, n2).map(|p| -p.ln_moment()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n1, n2, ln_inv_moment })
    }

    pub fn k(&self) -> u32 {
        (self.ln_inv_moment.len() - 1) as u32
    }

    pub fn arm_sizes(&self) -> (u32, u32) {
        (self.n1, self.n2)
    }

    /// Σ̂_k at SD ratio `ratio` = s₁/s₂.
    pub fn sum(&self, ratio: f64) -> f64 {
        let ln_r = ratio.ln();
        let mut total = 0.0;
        for (j, c) in self.ln_inv_moment.iter().enumerate() {
            total += (c + j as f64 * ln_r).exp();
        }
        total
    }

    /// The individual terms (s₁/s₂)^j / M_{j/2}.
    pub fn terms(&self, ratio: f64) -> Vec<f64> {
        let ln_r = ratio.ln();
        self.ln_inv_moment
            .iter()
            .enumerate()
            .map(|(j, c)| (c + j as f64 * ln_r).exp())
            .collect()
    }
}

/// Σ̂_k from the two summaries taken in the order given (r = s₁/s₂).
///
/// No reordering happens here; [`corrected_estimate`] orients the arms
/// before calling into the series.
pub fn sigma_series(t1: GroupSummary, t2: GroupSummary, k: u32) -> Result<f64> {
    let table = SeriesTable::new(t1.n, t2.n, k)?;
    Ok(table.sum(t1.sd() / t2.sd()))
}

/// Output of the bias-corrected series estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    /// s₁/s₂ after orientation, in (0, 1).
    pub sigma_ratio_hat: f64,
    /// Σ̂_k.
    pub sigma_series: f64,
    /// Â_k.
    pub a_hat: f64,
    pub k: u32,
    pub orientation: Orientation,
    /// Size of the j = k term, a rough convergence diagnostic.
    pub last_term: f64,
}

/// Bias-corrected estimate Â_k = x̄₂ + (x̄₁ − x̄₂) Σ̂_k.
///
/// The arm with the smaller sample SD takes subscript 1. `k` defaults to
/// [`default_k`] of the oriented n₂.
pub fn corrected_estimate(t1: GroupSummary, t2: GroupSummary, k: Option<u32>) -> Result<SeriesEstimate> {
    let (_, b, _) = orient(t1, t2)?;
    let k = match k {
        Some(k) => k,
        None => default_k(b.n)?,
    };
    CorrectedEstimator::new(t1.n, t2.n, Some(k))?.estimate(t1, t2)
}

/// Series estimator with tables prepared for fixed arm sizes, for repeated
/// use on many summaries (simulation repetitions, bootstrap replicates).
#[derive(Debug, Clone)]
pub struct CorrectedEstimator {
    n1: u32,
    n2: u32,
    /// Table used when arm 2 has the larger SD.
    as_given: std::result::Result<SeriesTable, Error>,
    /// Table used when arm 1 has the larger SD.
    swapped: std::result::Result<SeriesTable, Error>,
}

impl CorrectedEstimator {
    /// Estimator for arms of sizes `n1`, `n2`. An explicit `k` must respect
    /// the bound n₂ − 2 of whichever orientation the data ends up in; with
    /// `None` each orientation uses its own [`default_k`].
    pub fn new(n1: u32, n2: u32, k: Option<u32>) -> Result<Self> {
        Self::build(n1, n2, |n_large| match k {
            Some(k) => Ok(k),
            None => default_k(n_large),
        })
    }

    /// Like [`new`](Self::new) but lowers `k` to n₂ − 2 when an orientation
    /// cannot support it.
    pub fn capped(n1: u32, n2: u32, k: u32) -> Result<Self> {
        Self::build(n1, n2, |n_large| {
            if n_large < 2 {
                return Err(Error::InsufficientData { n: n_large });
            }
            Ok(k.min(n_large - 2))
        })
    }

    fn build(n1: u32, n2: u32, k_for: impl Fn(u32) -> Result<u32>) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::invalid(
                "n",
                format!("arm sizes must be at least 2, got {n1} and {n2}"),
            ));
        }
        let as_given = k_for(n2).and_then(|k| SeriesTable::new(n1, n2, k));
        let swapped = if n1 == n2 {
            as_given.clone()
        } else {
            k_for(n1).and_then(|k| SeriesTable::new(n2, n1, k))
        };
        Ok(Self {
            n1,
            n2,
            as_given,
            swapped,
        })
    }

    pub fn estimate(&self, t1: GroupSummary, t2: GroupSummary) -> Result<SeriesEstimate> {
        if t1.n != self.n1 || t2.n != self.n2 {
            return Err(Error::invalid(
                "n",
                format!(
                    "estimator prepared for n = ({}, {}), got ({}, {})",
                    self.n1, self.n2, t1.n, t2.n
                ),
            ));
        }
        let (a, b, orientation) = orient(t1, t2)?;
        let table = match orientation {
            Orientation::AsGiven => &self.as_given,
            Orientation::Swapped => &self.swapped,
        }
        .as_ref()
        .map_err(Clone::clone)?;
        let ratio = a.sd() / b.sd();
        let sigma_series = table.sum(ratio);
        let k = table.k();
        let last_term = (table.ln_inv_moment[k as usize] + f64::from(k) * ratio.ln()).exp();
        Ok(SeriesEstimate {
            sigma_ratio_hat: ratio,
            sigma_series,
            a_hat: b.mean + (a.mean - b.mean) * sigma_series,
            k,
            orientation,
            last_term,
        })
    }
}
