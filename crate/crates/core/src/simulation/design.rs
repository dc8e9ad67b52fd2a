use crate::changepoint::{true_changepoint, GroupParams};
use crate::{Error, Result};

/// k values shown when plotting Σ̂_k convergence.
pub const FIG1_K_GRID: [u32; 9] = [10, 20, 30, 40, 50, 75, 100, 150, 200];

/// Grid for the Σ̂_k convergence series.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSeriesDesign {
    /// σ-ratios α = σ_T/σ_C, each in (0, 1).
    pub alphas: Vec<f64>,
    /// Arm sizes (n_T = n_C = n).
    pub ns: Vec<u32>,
    pub reps: usize,
    /// Truncations to evaluate. `None` uses [`FIG1_K_GRID`] restricted to
    /// k ≤ n − 2 for each n; an explicit list must be valid for every n.
    pub k_grid: Option<Vec<u32>>,
    pub seed: u64,
}

impl SigmaSeriesDesign {
    /// α = 0.1, …, 0.9; n = 12, 22, …, 202; 10 000 repetitions.
    pub fn reference(seed: u64) -> Self {
        Self {
            alphas: (1..=9).map(|i| f64::from(i) / 10.0).collect(),
            ns: vec![12, 22, 32, 42, 52, 77, 102, 152, 202],
            reps: 10_000,
            k_grid: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::invalid("alphas", "at least one value is required"));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::invalid(
                "alphas",
                format!("every alpha must lie in (0, 1), got {a}"),
            ));
        }
        if self.ns.is_empty() {
            return Err(Error::invalid("ns", "at least one value is required"));
        }
        if let Some(n) = self.ns.iter().find(|n| **n < 3) {
            return Err(Error::invalid("ns", format!("arm sizes must be at least 3, got {n}")));
        }
        if self.reps < 2 {
            return Err(Error::invalid("reps", "at least 2 repetitions are required"));
        }
        if let Some(ks) = &self.k_grid {
            if ks.is_empty() {
                return Err(Error::invalid("k_grid", "at least one value is required"));
            }
            for &n in &self.ns {
                if let Some(&k) = ks.iter().find(|&&k| k > n - 2) {
                    return Err(Error::TruncationBound { k, max: n - 2 });
                }
            }
        }
        Ok(())
    }

    /// The truncations evaluated at arm size `n`, ascending.
    pub fn ks_for(&self, n: u32) -> Vec<u32> {
        let mut ks: Vec<u32> = match &self.k_grid {
            Some(ks) => ks.clone(),
            None => FIG1_K_GRID.iter().copied().filter(|&k| k + 2 <= n).collect(),
        };
        ks.sort_unstable();
        ks.dedup();
        ks
    }
}

/// One combination of the changepoint design grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: u32,
    pub mu_c: f64,
    /// Δ = μ_T − μ_C.
    pub delta: f64,
    pub sigma_c: f64,
    /// α = σ_T/σ_C.
    pub alpha: f64,
}

impl Cell {
    pub fn treatment(&self) -> GroupParams {
        GroupParams {
            mu: self.mu_c + self.delta,
            sigma: self.alpha * self.sigma_c,
        }
    }

    pub fn control(&self) -> GroupParams {
        GroupParams {
            mu: self.mu_c,
            sigma: self.sigma_c,
        }
    }

    /// A = μ_C + Δ/(1 − α).
    pub fn true_a(&self) -> Result<f64> {
        true_changepoint(self.treatment(), self.control())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::invalid("n", format!("must be at least 3, got {}", self.n)));
        }
        if !(self.sigma_c > 0.0 && self.sigma_c.is_finite()) {
            return Err(Error::invalid(
                "sigma_c",
                format!("must be positive, got {}", self.sigma_c),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must lie in (0, 1), got {}", self.alpha),
            ));
        }
        if !self.mu_c.is_finite() || !self.delta.is_finite() {
            return Err(Error::invalid("delta", "means must be finite"));
        }
        if self.true_a()? == 0.0 {
            return Err(Error::UndefinedRelativeWidth);
        }
        Ok(())
    }
}

/// Grid for the bias/coverage/width series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangepointDesign {
    pub ns: Vec<u32>,
    pub mu_c: f64,
    pub deltas: Vec<f64>,
    pub sigma_cs: Vec<f64>,
    pub alphas: Vec<f64>,
    /// Repetitions per cell.
    pub m: usize,
    /// Bootstrap replicates per repetition.
    pub b: usize,
    pub seed: u64,
}

impl ChangepointDesign {
    /// The full reference grid: 6 · 4 · 5 · 4 = 480 cells, M = 1000, B = 2000.
    pub fn reference(seed: u64) -> Self {
        Self {
            ns: vec![20, 50, 100, 250, 500, 1000],
            mu_c: 1.0,
            deltas: vec![-2.0, -1.0, 1.0, 2.0],
            sigma_cs: vec![0.2, 0.5, 1.0, 1.5, 2.0],
            alphas: vec![0.3, 0.5, 0.7, 0.9],
            m: 1000,
            b: 2000,
            seed,
        }
    }

    /// Cells ordered by n, then Δ, then σ_C, then α.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::with_capacity(self.ns.len() * self.deltas.len() * self.sigma_cs.len() * self.alphas.len());
        for &n in &self.ns {
            for &delta in &self.deltas {
                for &sigma_c in &self.sigma_cs {
                    for &alpha in &self.alphas {
                        cells.push(Cell {
                            n,
                            mu_c: self.mu_c,
                            delta,
                            sigma_c,
                            alpha,
                        });
                    }
                }
            }
        }
        cells
    }

    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("ns", self.ns.is_empty()),
            ("deltas", self.deltas.is_empty()),
            ("sigma_cs", self.sigma_cs.is_empty()),
            ("alphas", self.alphas.is_empty()),
        ] {
            if empty {
                return Err(Error::invalid(name, "at least one value is required"));
            }
        }
        if self.m < 2 {
            return Err(Error::invalid("m", "at least 2 repetitions are required"));
        }
        if self.b < 2 {
            return Err(Error::invalid("b", "at least 2 bootstrap replicates are required"));
        }
        self.cells().iter().try_for_each(Cell::validate)
    }
}
