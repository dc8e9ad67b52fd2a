use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// One draw of a sample mean: N(μ, σ²/n).
pub fn sample_normal_mean<R: Rng + ?Sized>(mu: f64, sigma: f64, n: u32, rng: &mut R) -> f64 {
    debug_assert!(sigma >= 0.0 && n >= 1);
    let z: f64 = StandardNormal.sample(rng);
    mu + sigma / f64::from(n).sqrt() * z
}

/// One draw of a sample variance: σ² χ²_{n−1} / (n − 1), drawn as
/// Gamma(shape (n−1)/2, scale 2σ²/(n−1)).
pub fn sample_variance<R: Rng + ?Sized>(sigma2: f64, n: u32, rng: &mut R) -> f64 {
    debug_assert!(sigma2 > 0.0 && n >= 2);
    let df = f64::from(n - 1);
    scaled_chi_square(df, sigma2 / df, rng)
}

/// One draw from F(ν₁, ν₂) as (χ²_ν₁/ν₁) / (χ²_ν₂/ν₂).
pub fn sample_f_ratio<R: Rng + ?Sized>(nu1: u32, nu2: u32, rng: &mut R) -> f64 {
    debug_assert!(nu1 >= 1 && nu2 >= 1);
    let a = f64::from(nu1);
    let b = f64::from(nu2);
    let num = scaled_chi_square(a, 1.0 / a, rng);
    let den = scaled_chi_square(b, 1.0 / b, rng);
    num / den
}

/// `factor · χ²_df`.
fn scaled_chi_square<R: Rng + ?Sized>(df: f64, factor: f64, rng: &mut R) -> f64 {
    Gamma::new(0.5 * df, 2.0 * factor)
        .expect("shape and scale are positive")
        .sample(rng)
}
