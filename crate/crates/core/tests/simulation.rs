use sscor::correlation::asv_two_stage;
use sscor::elliptical::Family;
use sscor::simharness::{run_coverage, run_length, ExperimentConfig, ExperimentRow, SimEstimator};

const T5: Family = Family::Student { nu: 5.0 };

fn single(family: Family, rho: f64, n: usize, reps: usize, e: SimEstimator) -> ExperimentRow {
    let config = ExperimentConfig {
        families: vec![family],
        rhos: vec![rho],
        ns: vec![n],
        reps,
        estimators: vec![e],
        ..ExperimentConfig::default()
    };
    run_coverage(&config).unwrap().remove(0)
}

#[test]
fn coverage_examples() {
    let r = single(Family::Normal, 0.5, 50, 10_000, SimEstimator::SscorH);
    assert!((r.coverage_pct - 95.0).abs() <= 1.0, "{r:?}");
    let r = single(Family::Normal, 0.0, 10, 10_000, SimEstimator::Cor);
    assert!((r.coverage_pct - 77.0).abs() <= 1.5, "{r:?}");
    assert_eq!(r.reps_used + r.failures, r.reps);
}

#[test]
fn small_sample_length_example() {
    let r = single(T5, 0.0, 10, 10_000, SimEstimator::Sscor);
    assert!((r.avg_length_times_sqrt_n - 4.75).abs() <= 0.05, "{r:?}");
}

#[test]
fn scaled_lengths_converge_to_the_asymptotic_value() {
    let config = ExperimentConfig {
        families: vec![Family::Normal],
        rhos: vec![0.0, 0.5],
        ns: vec![10_000],
        reps: 300,
        estimators: vec![SimEstimator::Sscor],
        ..ExperimentConfig::default()
    };
    for r in run_length(&config).unwrap() {
        let limit = 2.0 * 1.959964 * asv_two_stage(r.rho).sqrt();
        assert!((r.avg_length_times_sqrt_n / limit - 1.0).abs() < 0.01, "{r:?}");
    }
}

#[test]
fn rows_satisfy_invariants() {
    let config = ExperimentConfig {
        families: vec![Family::Normal, T5, Family::Student { nu: 3.0 }],
        ns: vec![10, 20],
        reps: 200,
        ..ExperimentConfig::default()
    };
    for r in run_coverage(&config).unwrap() {
        assert!((0.0..=100.0).contains(&r.coverage_pct));
        assert!(r.avg_length_times_sqrt_n >= 0.0);
        assert_eq!(r.reps_used + r.failures, r.reps);
    }
}

/// Every reference coverage value at full scale. Roughly an hour on one core; run
/// with `cargo test --release --test simulation -- --ignored`.
#[test]
#[ignore]
fn full_coverage_grid_within_four_binomial_se() {
    #[rustfmt::skip]
    let reference: [(&str, f64, [[f64; 4]; 6]); 6] = [
        ("normal", 0.0, [[86., 94., 77., 83.], [90., 94., 86., 89.], [93., 95., 92., 93.], [93., 95., 93., 94.], [95., 95., 95., 95.], [95., 95., 95., 95.]]),
        ("normal", 0.5, [[87., 93., 78., 83.], [91., 95., 87., 90.], [93., 95., 92., 93.], [94., 95., 93., 94.], [95., 95., 95., 95.], [95., 95., 95., 95.]]),
        ("t5", 0.0, [[85., 94., 70., 76.], [90., 95., 81., 85.], [93., 95., 88., 90.], [94., 95., 91., 92.], [95., 95., 94., 94.], [95., 95., 95., 95.]]),
        ("t5", 0.5, [[87., 93., 71., 77.], [90., 95., 80., 85.], [93., 95., 88., 90.], [94., 95., 91., 92.], [95., 95., 94., 94.], [95., 95., 95., 95.]]),
        ("t3", 0.0, [[85., 94., 64., 71.], [90., 94., 74., 79.], [93., 95., 82., 86.], [94., 95., 86., 88.], [95., 95., 90., 91.], [95., 95., 94., 95.]]),
        ("t3", 0.5, [[87., 93., 66., 72.], [90., 94., 76., 81.], [93., 95., 82., 85.], [94., 95., 86., 88.], [94., 95., 90., 92.], [95., 95., 94., 94.]]),
    ];
    let rows = run_coverage(&ExperimentConfig::default()).unwrap();
    let ns = [10, 20, 50, 100, 500, 10_000];
    let mut misses = Vec::new();
    for (dist, rho, block) in reference {
        for (i, n) in ns.into_iter().enumerate() {
            for (k, e) in SimEstimator::ALL.into_iter().enumerate() {
                let r = rows
                    .iter()
                    .find(|r| r.distribution == dist && r.rho == rho && r.n == n && r.estimator == e)
                    .unwrap();
                // Reference values are rounded to integers.
                if (r.coverage_pct - block[i][k]).abs() > 4.0 * r.monte_carlo_se + 0.5 {
                    misses.push(format!("{dist}/{rho}/{n}/{}: {:.2} vs {}", e.name(), r.coverage_pct, block[i][k]));
                }
            }
        }
    }
    assert!(misses.is_empty(), "{misses:#?}");
}
