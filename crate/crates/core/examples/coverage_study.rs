//! A small coverage and length study. Pass a replication count as the first
//! argument (default 2000).

use sscor::elliptical::Family;
use sscor::simharness::{render_table, run_coverage, ExperimentConfig, TableMetric};

fn main() -> sscor::Result<()> {
    let reps = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2_000);
    let config = ExperimentConfig {
        families: vec![Family::Normal, Family::Student { nu: 3.0 }],
        ns: vec![10, 50, 200],
        reps,
        ..ExperimentConfig::default()
    };
    config.validate()?;
    let rows = run_coverage(&config)?;
    println!("coverage (%), {reps} replications per cell");
    print!("{}", render_table(&rows, TableMetric::Coverage));
    println!("\naverage length x sqrt(n)");
    print!("{}", render_table(&rows, TableMetric::Length));
    Ok(())
}
