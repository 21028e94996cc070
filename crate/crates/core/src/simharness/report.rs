use std::fmt::Write as _;
use std::io::{self, Write};

use super::{ExperimentRow, SimEstimator};

pub const CSV_HEADER: &str = "dist,rho,n,estimator,coverage_pct,mc_se,avg_len_sqrt_n,reps,failures";

/// `%.6g`-style formatting: six significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-5, 1e6)`.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(mut out: W, rows: &[ExperimentRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.distribution,
            format_sig6(r.rho),
            r.n,
            r.estimator.name(),
            format_sig6(r.coverage_pct),
            format_sig6(r.monte_carlo_se),
            format_sig6(r.avg_length_times_sqrt_n),
            r.reps,
            r.failures
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableMetric {
    Coverage,
    Length,
}

/// Wide layout: one block per distribution, one line per `n`, and for every
/// `ρ` one column per estimator.
pub fn render_table(rows: &[ExperimentRow], metric: TableMetric) -> String {
    let mut dists: Vec<&str> = Vec::new();
    let mut rhos: Vec<f64> = Vec::new();
    let mut ns: Vec<usize> = Vec::new();
    let mut ests: Vec<SimEstimator> = Vec::new();
    for r in rows {
        if !dists.contains(&r.distribution.as_str()) {
            dists.push(&r.distribution);
        }
        if !rhos.contains(&r.rho) {
            rhos.push(r.rho);
        }
        if !ns.contains(&r.n) {
            ns.push(r.n);
        }
        if !ests.contains(&r.estimator) {
            ests.push(r.estimator);
        }
    }

    let width = 9;
    let mut s = String::new();
    let _ = write!(s, "{:>7} ", "rho");
    for rho in &rhos {
        let _ = write!(s, "|{:^w$}", format_sig6(*rho), w = width * ests.len());
    }
    s.push('\n');
    let _ = write!(s, "{:>7} ", "n");
    for _ in &rhos {
        s.push('|');
        for e in &ests {
            let _ = write!(s, "{:>width$}", e.name());
        }
    }
    s.push('\n');

    for dist in &dists {
        let _ = writeln!(s, "{dist}");
        for &n in &ns {
            let _ = write!(s, "{n:>7} ");
            for &rho in &rhos {
                s.push('|');
                for &e in &ests {
                    let cell = rows.iter().find(|r| {
                        r.distribution == *dist && r.rho == rho && r.n == n && r.estimator == e
                    });
                    let text = match (cell, metric) {
                        (None, _) => "-".to_string(),
                        (Some(r), TableMetric::Coverage) => format!("{:.1}", r.coverage_pct),
                        (Some(r), TableMetric::Length) => format!("{:.2}", r.avg_length_times_sqrt_n),
                    };
                    let _ = write!(s, "{text:>width$}");
                }
            }
            s.push('\n');
        }
    }
    s
}
