//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sscor::correlation::{
    asv_two_stage, h, h_inv, rho_from_sscm, sscor_two_stage, standardize, H_BOUND,
};
use sscor::elliptical::{sample, EllipticalSpec, Family, SeedSpec};
use sscor::location::LocationMethod;
use sscor::scale::{qn, qn_naive, ScaleMethod};
use sscor::signs::{asym_constants, theoretical_sscm};
use sscor::simharness::{
    run_coverage, run_length, verify_asymptotics_with, ExperimentConfig, ExperimentRow,
    SimEstimator, VerifyOptions,
};
use sscor::SampleMatrix;

const SEED: u64 = 20_150_101;
const T5: Family = Family::Student { nu: 5.0 };
const T3: Family = Family::Student { nu: 3.0 };

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn find<'a>(rows: &'a [ExperimentRow], dist: &str, rho: f64, n: usize, e: SimEstimator) -> &'a ExperimentRow {
    rows.iter()
        .find(|r| r.distribution == dist && r.rho == rho && r.n == n && r.estimator == e)
        .expect("cell present")
}

/// Reference sscor-h coverage (%); identical for the three families.
fn reference_sscor_h(rho: f64, n: usize) -> f64 {
    match (rho == 0.0, n) {
        (true, 10) => 94.0,
        (false, 10) => 93.0,
        _ => 95.0,
    }
}

fn coverage_cells(families: Vec<Family>, tolerance: f64) -> Outcome {
    let config = ExperimentConfig {
        families,
        rhos: vec![0.0, 0.5],
        ns: vec![10, 50, 500],
        reps: 10_000,
        estimators: vec![SimEstimator::SscorH],
        master_seed: SEED,
        ..ExperimentConfig::default()
    };
    let rows = run_coverage(&config).unwrap();
    let mut worst: f64 = 0.0;
    let mut cells = Vec::new();
    for r in &rows {
        let diff = r.coverage_pct - reference_sscor_h(r.rho, r.n);
        worst = worst.max(diff.abs());
        cells.push(format!("{}/{}/{}={:.1}", r.distribution, r.rho, r.n, r.coverage_pct));
    }
    outcome(
        worst <= tolerance,
        format!("{} cells, max |diff| {worst:.2}pp (tol {tolerance}pp): {}", rows.len(), cells.join(" ")),
    )
}

fn criterion_1() -> Outcome {
    coverage_cells(vec![Family::Normal, T5], 1.0)
}

fn criterion_1_t3() -> Outcome {
    coverage_cells(vec![T3], 2.0)
}

fn criterion_2() -> Outcome {
    let base = ExperimentConfig {
        families: vec![Family::Normal],
        ns: vec![10_000],
        reps: 2_000,
        master_seed: SEED,
        ..ExperimentConfig::default()
    };
    let sscor = run_length(&ExperimentConfig {
        rhos: vec![0.0],
        estimators: vec![SimEstimator::Sscor],
        ..base.clone()
    })
    .unwrap();
    let cor = run_length(&ExperimentConfig {
        rhos: vec![0.5],
        estimators: vec![SimEstimator::Cor],
        ..base
    })
    .unwrap();
    let a = find(&sscor, "normal", 0.0, 10_000, SimEstimator::Sscor).avg_length_times_sqrt_n;
    let b = find(&cor, "normal", 0.5, 10_000, SimEstimator::Cor).avg_length_times_sqrt_n;
    outcome(
        (a - 5.54).abs() <= 0.03 && (b - 2.94).abs() <= 0.03,
        format!("sscor rho=0: {a:.4} (5.54 +- 0.03); cor rho=0.5: {b:.4} (2.94 +- 0.03)"),
    )
}

fn criterion_3() -> Outcome {
    let len = |rho: f64| 2.0 * 1.959964 * asv_two_stage(rho).sqrt();
    let (a, b) = (len(0.0), len(0.5));
    outcome(
        (a - 5.5437).abs() < 1e-4 && (b - 4.3156).abs() < 1e-4,
        format!("rho=0: {a:.6} vs 5.5437; rho=0.5: {b:.6} vs 4.3156 (|diff| < 1e-4)"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst_fd: f64 = 0.0;
    for i in 0..201 {
        let x = -0.995 + 1.99 * i as f64 / 200.0;
        let step = 1e-6;
        let fd = (h(x + step).unwrap() - h(x - step).unwrap()) / (2.0 * step);
        let exact = 1.0 / asv_two_stage(x).sqrt();
        worst_fd = worst_fd.max(((fd - exact) / exact).abs());
    }
    let mut worst_x: f64 = 0.0;
    let mut worst_y: f64 = 0.0;
    let y_max = h(0.995).unwrap();
    for i in 0..=2000 {
        let t = -1.0 + i as f64 / 1000.0;
        worst_x = worst_x.max((h_inv(h(t).unwrap()) - t).abs());
        let y = y_max * t;
        worst_y = worst_y.max((h(h_inv(y)).unwrap() - y).abs());
    }
    let ends = (h(1.0).unwrap() - H_BOUND).abs().max((h(-1.0).unwrap() + H_BOUND).abs());
    outcome(
        worst_fd < 1e-6 && worst_x < 1e-10 && worst_y < 1e-10 && ends < 1e-12,
        format!(
            "h' rel err {worst_fd:.2e}; h_inv(h(x)) {worst_x:.2e}; h(h_inv(y)) {worst_y:.2e} on |y| <= h(0.995); h(+-1) {ends:.2e}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let worst = (-99..=99)
        .map(|i| {
            let rho = i as f64 / 100.0;
            (rho_from_sscm(&theoretical_sscm(rho).unwrap()).unwrap() - rho).abs()
        })
        .fold(0.0, f64::max);
    outcome(worst < 1e-10, format!("199 values, max error {worst:.2e}"))
}

/// Richardson-extrapolated central difference of ρ̂ in the s₁₂ direction.
fn s12_gradient(rho: f64) -> f64 {
    let s = theoretical_sscm(rho).unwrap();
    let at = |d: f64| {
        let mut t = s.clone();
        t.set(0, 1, s.get(0, 1) + d);
        rho_from_sscm(&t).unwrap()
    };
    let central = |e: f64| (at(e) - at(-e)) / (2.0 * e);
    let (coarse, fine) = (central(2e-4), central(1e-4));
    fine + (fine - coarse) / 3.0
}

fn criterion_6() -> Outcome {
    let mut worst_grad: f64 = 0.0;
    let mut worst_asv: f64 = 0.0;
    for rho in [0.0, 0.3, -0.3, 0.8, -0.8] {
        let r = (1.0f64 - rho * rho).sqrt();
        let g = s12_gradient(rho);
        worst_grad = worst_grad.max((g - 2.0 * r * (1.0 + r)).abs());
        let w = asym_constants(rho).unwrap().w;
        worst_asv = worst_asv.max((g * g * w - asv_two_stage(rho)).abs());
    }
    outcome(
        worst_grad < 1e-6 && worst_asv < 1e-10,
        format!("gradient error {worst_grad:.2e}; gradient^2 * w vs asv {worst_asv:.2e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    let mut tied = 0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=60);
        let alphabet = rng.random_range(2..=10);
        let v: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    rng.random_range(0..alphabet) as f64
                } else {
                    rng.random_range(-5.0..5.0)
                }
            })
            .collect();
        let mut s = v.clone();
        s.sort_unstable_by(f64::total_cmp);
        tied += usize::from(s.windows(2).any(|w| w[0] == w[1]));
        mismatches += usize::from(qn(&v).unwrap() != qn_naive(&v).unwrap());
    }
    outcome(mismatches == 0, format!("1000 samples ({tied} with ties), {mismatches} mismatches"))
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for rho in [0.0, 0.5] {
        let r = verify_asymptotics_with(&VerifyOptions::new(rho, 500, 10_000, SEED)).unwrap();
        let var_ok = r.var_rho.rel_error() < 0.05;
        let w_ok = [r.alpha, r.beta, r.gamma].iter().all(|c| c.z_score() <= 3.0);
        let s12_ok = r.var_s12.rel_error() < 0.05;
        pass &= var_ok && w_ok && s12_ok;
        parts.push(format!(
            "rho={rho}: var {:.4}/{:.4} ({:.1}%), alpha z {:.2}, beta z {:.2}, gamma z {:.2}, var_s12 {:.4}/{:.4} ({:.1}%)",
            r.var_rho.empirical,
            r.var_rho.theoretical,
            100.0 * r.var_rho.rel_error(),
            r.alpha.z_score(),
            r.beta.z_score(),
            r.gamma.z_score(),
            r.var_s12.empirical,
            r.var_s12.theoretical,
            100.0 * r.var_s12.rel_error(),
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let location = LocationMethod::SpatialMedian;
    let (mut exact_fail, mut real_worst, mut flip_fail, mut swap_worst) = (0, 0.0f64, 0, 0.0f64);
    for case in 0..500u64 {
        // Exact in floating point: integer data, power-of-two scales, integer shifts.
        let n = rng.random_range(10..60);
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.random_range(-300..300) as f64, rng.random_range(-300..300) as f64])
            .collect();
        let data = SampleMatrix::from_rows(&rows).unwrap();
        let a = [2f64.powi(rng.random_range(-8..9)), 2f64.powi(rng.random_range(-8..9))];
        let b = [rng.random_range(-999..1000) as f64, rng.random_range(-999..1000) as f64];
        let mapped = data.map_entries(|j, v| a[j] * v + b[j]).unwrap();
        let same_inputs = standardize(&data, ScaleMethod::qn()).unwrap().as_slice()
            == standardize(&mapped, ScaleMethod::qn()).unwrap().as_slice();
        let e = sscor_two_stage(&data, ScaleMethod::qn(), &location).unwrap();
        let em = sscor_two_stage(&mapped, ScaleMethod::qn(), &location).unwrap();
        exact_fail += usize::from(!same_inputs || e.rho_hat.to_bits() != em.rho_hat.to_bits());

        // Generic positive scales and shifts on Gaussian data.
        let rho = rng.random_range(-0.9..0.9);
        let g = sample(&EllipticalSpec::standard(Family::Normal, rho), n, SeedSpec::new(SEED, case)).unwrap();
        let a = [rng.random_range(0.01..100.0), rng.random_range(0.01..100.0)];
        let b = [rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)];
        let gm = g.map_entries(|j, v| a[j] * v + b[j]).unwrap();
        let eg = sscor_two_stage(&g, ScaleMethod::qn(), &location).unwrap().rho_hat;
        let egm = sscor_two_stage(&gm, ScaleMethod::qn(), &location).unwrap().rho_hat;
        real_worst = real_worst.max((eg - egm).abs());

        let flipped = g.map_entries(|j, v| if j == 1 { -v } else { v }).unwrap();
        let ef = sscor_two_stage(&flipped, ScaleMethod::qn(), &location).unwrap().rho_hat;
        flip_fail += usize::from(ef != -eg);

        let es = sscor_two_stage(&g.swap_columns(0, 1), ScaleMethod::qn(), &location).unwrap().rho_hat;
        swap_worst = swap_worst.max((es - eg).abs());
    }
    outcome(
        exact_fail == 0 && real_worst < 1e-9 && flip_fail == 0 && swap_worst < 1e-12,
        format!(
            "500 cases each: exact-arithmetic affine maps {exact_fail} non-identical; generic affine max diff {real_worst:.1e}; sign flip {flip_fail} not exactly odd; swap max diff {swap_worst:.1e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_sscor"))
            .args([
                "sim-coverage", "--dist", "normal", "--dist", "t5", "--rho", "0", "--rho", "0.5",
                "--n", "10", "--n", "50", "--reps", "500", "--seed", "42", "--threads", threads,
            ])
            .output()
            .expect("binary runs")
    };
    let outputs: Vec<_> = ["1", "4", "8"].into_iter().map(run).collect();
    let ok = outputs.iter().all(|o| o.status.success())
        && outputs.windows(2).all(|w| w[0].stdout == w[1].stdout);
    outcome(
        ok,
        format!("threads 1/4/8: {} bytes each, identical = {ok}", outputs[0].stdout.len()),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", "sscor-h coverage, normal and t5, +-1pp", criterion_1),
        ("1-t3", "sscor-h coverage, t3, +-2pp", criterion_1_t3),
        ("2", "scaled CI lengths at n=10000", criterion_2),
        ("3", "analytic interval lengths", criterion_3),
        ("4", "variance-stabilising transform", criterion_4),
        ("5", "SSCM inversion roundtrip", criterion_5),
        ("6", "delta-method gradient", criterion_6),
        ("7", "fast Qn equals naive Qn", criterion_7),
        ("8", "asymptotic constants by Monte Carlo", criterion_8),
        ("9", "invariance properties", criterion_9),
        ("10", "deterministic CSV across thread counts", criterion_10),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!result.pass);
        println!(
            "{status} [{id}] {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
