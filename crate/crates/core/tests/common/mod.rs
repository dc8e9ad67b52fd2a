//! Shared oracles and the randomized property suite.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use statrs::distribution::{ContinuousCDF, Normal};

use dominance_core::bootstrap::{bootstrap_ci, empirical_quantile, BootstrapConfig};
use dominance_core::changepoint::{
    classify_dominance, corrected_estimate, plug_in_estimate, sigma_series, true_changepoint, Arm, DominanceResult,
    GroupParams, GroupSummary, SeriesTable,
};
use dominance_core::distributions::sample_variance;
use dominance_core::report::{read_csv, rows_from_cells, rows_from_sigma, write_csv, Metric, ResultRow, Series};
use dominance_core::rng::stream;
use dominance_core::simulation::{run_full_grid, run_sigma_series, ChangepointDesign, MetricValue, SigmaSeriesDesign};

pub const CASES: u32 = 1000;

fn check<S>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn summary() -> impl Strategy<Value = GroupSummary> {
    (-50.0..50.0f64, 0.05..20.0f64, 3u32..300).prop_map(|(m, s, n)| GroupSummary::from_sd(m, s, n).unwrap())
}

fn distinct_sds(t1: &GroupSummary, t2: &GroupSummary) -> bool {
    (t1.sd() / t2.sd() - 1.0).abs() > 1e-6
}

pub fn equal_z_score() -> Result<(), String> {
    check(
        (-100.0..100.0f64, 0.01..100.0f64, -100.0..100.0f64, 0.01..100.0f64),
        |(m1, s1, m2, s2)| {
            prop_assume!((s1 / s2 - 1.0).abs() > 1e-3);
            let a = true_changepoint(GroupParams::new(m1, s1).unwrap(), GroupParams::new(m2, s2).unwrap()).unwrap();
            let (z1, z2) = ((a - m1) / s1, (a - m2) / s2);
            let scale = (a.abs() + m1.abs() + m2.abs()) / s1.min(s2);
            prop_assert!((z1 - z2).abs() <= 1e-12 * scale, "z1 {z1} z2 {z2}");
            Ok(())
        },
    )
}

/// Above the changepoint the wider group has the larger survival
/// probability, below it the narrower one.
pub fn crossing_orientation() -> Result<(), String> {
    check(
        (-10.0..10.0f64, -3.0..3.0f64, 0.1..10.0f64, 0.1..10.0f64),
        |(a, z0, s1, s2)| {
            prop_assume!((s1 / s2 - 1.0).abs() > 0.05);
            let (m1, m2) = (a - z0 * s1, a - z0 * s2);
            let result = classify_dominance(GroupParams::new(m1, s1).unwrap(), GroupParams::new(m2, s2).unwrap());
            let wide = if s1 > s2 { Arm::Group1 } else { Arm::Group2 };
            let DominanceResult::Crossing {
                changepoint,
                larger_above,
            } = result
            else {
                return Err(TestCaseError::fail(format!("expected a crossing, got {result:?}")));
            };
            prop_assert_eq!(larger_above, wide);
            prop_assert!((changepoint - a).abs() <= 1e-9 * (1.0 + a.abs()));

            let survival = |m: f64, s: f64, x: f64| 1.0 - Normal::new(m, s).unwrap().cdf(x);
            let eps = 1e-3 * s1.max(s2);
            let (up1, up2) = (survival(m1, s1, changepoint + eps), survival(m2, s2, changepoint + eps));
            let (lo1, lo2) = (survival(m1, s1, changepoint - eps), survival(m2, s2, changepoint - eps));
            if wide == Arm::Group1 {
                prop_assert!(up1 > up2 && lo1 < lo2);
            } else {
                prop_assert!(up2 > up1 && lo2 < lo1);
            }
            Ok(())
        },
    )
}

pub fn interchange_symmetry() -> Result<(), String> {
    check((summary(), summary()), |(t1, t2)| {
        prop_assume!(distinct_sds(&t1, &t2));
        prop_assert_eq!(plug_in_estimate(t1, t2).unwrap(), plug_in_estimate(t2, t1).unwrap());
        let a = corrected_estimate(t1, t2, None).unwrap();
        let b = corrected_estimate(t2, t1, None).unwrap();
        prop_assert_eq!(a.a_hat, b.a_hat);
        prop_assert_eq!(a.k, b.k);
        Ok(())
    })
}

pub fn affine_equivariance() -> Result<(), String> {
    check(
        (
            summary(),
            summary(),
            prop::sample::select(vec![-2.0, 0.5, 3.0]),
            prop::sample::select(vec![-1.0, 0.0, 7.0]),
        ),
        |(t1, t2, a, b)| {
            prop_assume!(distinct_sds(&t1, &t2));
            let map = |t: GroupSummary| GroupSummary::from_sd(a * t.mean + b, a.abs() * t.sd(), t.n).unwrap();
            let before = corrected_estimate(t1, t2, None).unwrap();
            let after = corrected_estimate(map(t1), map(t2), None).unwrap();
            let expected = a * before.a_hat + b;
            let scale = a.abs() * (t1.mean.abs() + t2.mean.abs()) * before.sigma_series + b.abs() + 1.0;
            prop_assert!(
                (after.a_hat - expected).abs() <= 1e-9 * scale,
                "got {} expected {}",
                after.a_hat,
                expected
            );
            Ok(())
        },
    )
}

/// Σ̂_k never decreases in k, and increases strictly while the added term
/// is representable against the partial sum.
pub fn series_monotone_in_k() -> Result<(), String> {
    check((summary(), summary(), 0.0..1.0f64), |(t1, t2, u)| {
        let k = ((t2.n - 3) as f64 * u) as u32;
        let lower = sigma_series(t1, t2, k).unwrap();
        let upper = sigma_series(t1, t2, k + 1).unwrap();
        prop_assert!(lower >= 1.0);
        let terms = SeriesTable::new(t1.n, t2.n, k + 1).unwrap().terms(t1.sd() / t2.sd());
        prop_assert!(terms.iter().all(|&t| t >= 0.0));
        let added = terms[k as usize + 1];
        if added > 4.0 * f64::EPSILON * lower {
            prop_assert!(upper > lower, "k {k}: {lower} -> {upper}");
        } else {
            prop_assert!(upper >= lower);
        }
        Ok(())
    })
}

pub fn quantile_monotone() -> Result<(), String> {
    check(
        (prop::collection::vec(-1e6..1e6f64, 1..300), 0.0..=1.0f64, 0.0..=1.0f64),
        |(mut values, p, q)| {
            values.sort_by(f64::total_cmp);
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            prop_assert!(empirical_quantile(&values, lo).unwrap() <= empirical_quantile(&values, hi).unwrap());
            Ok(())
        },
    )
}

pub fn ci_nesting() -> Result<(), String> {
    check(
        (summary(), summary(), 2usize..200, any::<u64>()),
        |(t1, t2, b, seed)| {
            prop_assume!(distinct_sds(&t1, &t2));
            let res = bootstrap_ci(t1, t2, &BootstrapConfig::new(b, seed)).unwrap();
            prop_assert!(res.ci95.0 <= res.ci90.0 && res.ci90.1 <= res.ci95.1);
            prop_assert!(res.ci90.0 <= res.median && res.median <= res.ci90.1);
            Ok(())
        },
    )
}

fn finite_f64() -> impl Strategy<Value = f64> {
    use prop::num::f64::{NEGATIVE, NORMAL, POSITIVE, SUBNORMAL, ZERO};
    POSITIVE | NEGATIVE | NORMAL | SUBNORMAL | ZERO
}

fn result_row() -> impl Strategy<Value = ResultRow> {
    (
        prop::sample::select(vec![Series::Sigma, Series::Changepoint]),
        any::<u32>(),
        prop::option::of(finite_f64()),
        prop::option::of(finite_f64()),
        finite_f64(),
        prop::option::of(any::<u32>()),
        prop::sample::select(Metric::ALL.to_vec()),
        finite_f64(),
        finite_f64(),
    )
        .prop_map(
            |(series, n, delta, sigma_c, alpha, k, metric, value, mc_se)| ResultRow {
                series,
                n,
                delta,
                sigma_c,
                alpha,
                k,
                metric,
                value,
                mc_se,
            },
        )
}

pub fn csv_round_trip() -> Result<(), String> {
    check(prop::collection::vec(result_row(), 0..20), |rows| {
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
        Ok(())
    })
}

fn csv_bytes(rows: &[ResultRow]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).unwrap();
    buf
}

pub fn parallelism_invariance() -> Result<(), String> {
    let design = (
        5u32..15,
        0.5..2.0f64,
        prop::sample::select(vec![-1.0, 1.0, 2.0]),
        0.2..2.0f64,
        0.2..0.95f64,
        2usize..5,
        2usize..10,
        any::<u64>(),
    );
    check(
        (design, 12u32..40, 2usize..50),
        |((n, mu_c, delta, sigma_c, alpha, m, b, seed), sn, reps)| {
            let d = ChangepointDesign {
                ns: vec![n],
                mu_c,
                deltas: vec![delta],
                sigma_cs: vec![sigma_c],
                alphas: vec![alpha],
                m,
                b,
                seed,
            };
            prop_assume!(d.validate().is_ok());
            let one = csv_bytes(&rows_from_cells(&run_full_grid(&d, 1).unwrap()));
            let eight = csv_bytes(&rows_from_cells(&run_full_grid(&d, 8).unwrap()));
            prop_assert_eq!(one, eight);

            let s = SigmaSeriesDesign {
                alphas: vec![alpha, 0.5],
                ns: vec![sn],
                reps,
                k_grid: None,
                seed,
            };
            let one = csv_bytes(&rows_from_sigma(&run_sigma_series(&s, 1).unwrap()));
            let eight = csv_bytes(&rows_from_sigma(&run_sigma_series(&s, 8).unwrap()));
            prop_assert_eq!(one, eight);
            Ok(())
        },
    )
}

type Property = (&'static str, fn() -> Result<(), String>);

/// The randomized property suite, each run over [`CASES`] inputs.
pub const PROPERTIES: [Property; 8] = [
    ("equal-z-score identity", equal_z_score),
    ("subscript-interchange symmetry", interchange_symmetry),
    ("affine equivariance", affine_equivariance),
    ("sigma series monotone in k", series_monotone_in_k),
    ("quantile monotonicity", quantile_monotone),
    ("CI nesting", ci_nesting),
    ("CSV round-trip", csv_round_trip),
    ("bit-identical output across parallelism", parallelism_invariance),
];

/// Mean of Σ̂_k over `reps` summary pairs with SD ratio `alpha`, both arms
/// of size `n`, for each k in `ks`.
pub fn series_expectation(n: u32, alpha: f64, ks: &[u32], reps: usize, seed: u64) -> Vec<MetricValue> {
    let mut rng = stream(seed, &[n as u64, alpha.to_bits()]);
    let mut samples = vec![Vec::with_capacity(reps); ks.len()];
    for _ in 0..reps {
        let t1 = GroupSummary::new(0.0, sample_variance(alpha * alpha, n, &mut rng), n).unwrap();
        let t2 = GroupSummary::new(0.0, sample_variance(1.0, n, &mut rng), n).unwrap();
        for (out, &k) in samples.iter_mut().zip(ks) {
            out.push(sigma_series(t1, t2, k).unwrap());
        }
    }
    samples.iter().map(|s| MetricValue::from_samples(s)).collect()
}

pub fn geometric_partial_sum(alpha: f64, k: u32) -> f64 {
    (0..=k).map(|j| alpha.powi(j as i32)).sum()
}
