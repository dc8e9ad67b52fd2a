use super::gamma_fn::{ln_gamma, ln_gamma_ratio};

const CF_MAX_ITER: usize = 20_000;
const CF_EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// ln B(a, b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    // ln Γ(a) + ln Γ(b) − ln Γ(a + b), with the large pair taken as a ratio.
    let (small, large) = if a < b { (a, b) } else { (b, a) };
    ln_gamma(small) - ln_gamma_ratio(large, small)
}

/// Regularized incomplete beta function I_x(a, b).
///
/// Continued fraction (modified Lentz), using the symmetry
/// I_x(a, b) = 1 − I_{1−x}(b, a) on whichever side converges faster.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front.exp() * beta_cf(x, a, b) / a).clamp(0.0, 1.0)
    } else {
        (1.0 - ln_front.exp() * beta_cf(1.0 - x, b, a) / b).clamp(0.0, 1.0)
    }
}

fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// CDF of the F(ν₁, ν₂) distribution.
pub fn f_cdf(x: f64, nu1: f64, nu2: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let u = nu1 * x / (nu1 * x + nu2);
    regularized_incomplete_beta(u, 0.5 * nu1, 0.5 * nu2)
}

/// Quantile of F(ν₁, ν₂) by bisection on [`f_cdf`].
///
/// Returns `NaN` for `p` outside (0, 1).
pub fn f_quantile(p: f64, nu1: f64, nu2: f64) -> f64 {
    if !(p > 0.0 && p < 1.0) {
        return f64::NAN;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f_cdf(hi, nu1, nu2) < p {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f_cdf(mid, nu1, nu2) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomplete_beta_closed_forms() {
        // I_x(1, 1) = x, I_x(a, 1) = x^a, I_x(1, b) = 1 − (1 − x)^b
        for &x in &[0.01, 0.3, 0.5, 0.77, 0.999] {
            assert!((regularized_incomplete_beta(x, 1.0, 1.0) - x).abs() < 1e-14);
            assert!((regularized_incomplete_beta(x, 3.5, 1.0) - x.powf(3.5)).abs() < 1e-14);
            assert!((regularized_incomplete_beta(x, 1.0, 4.0) - (1.0 - (1.0 - x).powi(4))).abs() < 1e-14);
        }
        assert_eq!(regularized_incomplete_beta(0.0, 2.0, 3.0), 0.0);
        assert_eq!(regularized_incomplete_beta(1.0, 2.0, 3.0), 1.0);
    }

    #[test]
    fn equal_df_median_is_one() {
        for nu in [1.0, 4.0, 11.0, 201.0] {
            assert!((f_cdf(1.0, nu, nu) - 0.5).abs() < 1e-12);
            assert!((f_quantile(0.5, nu, nu) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &(p, a, b) in &[
            (0.05, 11.0, 11.0),
            (0.01, 201.0, 201.0),
            (0.9, 3.0, 40.0),
            (0.999, 5.0, 2.0),
        ] {
            let q = f_quantile(p, a, b);
            assert!((f_cdf(q, a, b) - p).abs() < 1e-8, "p = {p}");
        }
        assert!(f_quantile(0.0, 3.0, 3.0).is_nan());
        assert!(f_quantile(1.0, 3.0, 3.0).is_nan());
    }
}
