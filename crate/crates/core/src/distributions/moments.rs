use super::gamma_fn::ln_gamma_ratio_pair;
use crate::{Error, Result};

/// Order and degrees of freedom of a fractional moment of an F variate.
///
/// `j` is the power of the SD ratio s₁/s₂, so the moment taken of
/// F(nu1, nu2) has order j/2. It is finite only for `j < nu2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FMomentParams {
    j: u32,
    nu1: u32,
    nu2: u32,
}

impl FMomentParams {
    pub fn new(j: u32, nu1: u32, nu2: u32) -> Result<Self> {
        if nu1 == 0 {
            return Err(Error::invalid("nu1", "degrees of freedom must be at least 1"));
        }
        if nu2 == 0 {
            return Err(Error::invalid("nu2", "degrees of freedom must be at least 1"));
        }
        if j >= nu2 {
            return Err(Error::MomentDoesNotExist { j, nu2 });
        }
        Ok(Self { j, nu1, nu2 })
    }

    /// Parameters for arms of size `n1`, `n2` (ν = n − 1).
    pub fn for_arms(j: u32, n1: u32, n2: u32) -> Result<Self> {
        Self::new(j, n1.saturating_sub(1), n2.saturating_sub(1))
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn nu1(&self) -> u32 {
        self.nu1
    }

    pub fn nu2(&self) -> u32 {
        self.nu2
    }

    /// ln M_{j/2}.
    pub fn ln_moment(&self) -> f64 {
        let j = f64::from(self.j);
        let nu1 = f64::from(self.nu1);
        let nu2 = f64::from(self.nu2);
        ln_gamma_ratio_pair(0.5 * nu1, 0.5 * nu2, 0.5 * j)
    }
}

/// E[F^{j/2}] for F ~ F(ν₁, ν₂):
///
/// (ν₂/ν₁)^{j/2} Γ((ν₁+j)/2) Γ((ν₂−j)/2) / (Γ(ν₁/2) Γ(ν₂/2)).
///
/// `E[(s₁/s₂)^j] = (σ₁/σ₂)^j · M_{j/2}` for normal samples of sizes
/// ν₁ + 1 and ν₂ + 1, which is what makes the series estimator unbiased
/// term by term.
pub fn f_moment_half(p: FMomentParams) -> f64 {
    p.ln_moment().exp()
}
