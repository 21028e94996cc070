use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sscor::elliptical::Family;
use sscor::location::LocationMethod;
use sscor::scale::ScaleMethod;
use sscor::simharness::{
    self, render_table, write_csv, ExperimentConfig, Settings, SimEstimator, TableMetric,
    VerifyOptions,
};
use sscor::Error;

#[derive(Parser)]
#[command(name = "sscor", version, about = "Spatial sign correlation estimation and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical coverage of the confidence intervals.
    SimCoverage(SimArgs),
    /// Average interval lengths times sqrt(n).
    SimLength(SimArgs),
    /// Monte Carlo check of the asymptotic variance and its constants.
    VerifyAsymptotics(VerifyArgs),
    /// Estimate the correlation of two CSV columns.
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct SimArgs {
    /// Distribution family: normal or tN (repeatable).
    #[arg(long = "dist")]
    dists: Vec<Family>,
    /// True correlation (repeatable).
    #[arg(long = "rho", allow_negative_numbers = true)]
    rhos: Vec<f64>,
    /// Sample size (repeatable).
    #[arg(long = "n")]
    ns: Vec<usize>,
    /// sscor, sscor_h, cor or cor_z (repeatable; default all).
    #[arg(long = "estimator")]
    estimators: Vec<SimEstimator>,
    /// Replications per cell.
    #[arg(long)]
    reps: Option<usize>,
    /// Nominal confidence level.
    #[arg(long)]
    level: Option<f64>,
    /// Master seed; results are identical for any thread count.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render the wide table instead of CSV.
    #[arg(long)]
    table: bool,
    /// Marginal scale: qn, mad, sd or qn_naive.
    #[arg(long)]
    scale: Option<ScaleMethod>,
    /// Location: spatial or coordwise.
    #[arg(long)]
    location: Option<LocationMethod>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "rho", allow_negative_numbers = true)]
    rhos: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 20_150_101)]
    seed: u64,
    #[arg(long, default_value = "normal")]
    dist: Family,
    #[arg(long, default_value = "qn")]
    scale: ScaleMethod,
    #[arg(long, default_value = "spatial")]
    location: LocationMethod,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    input: PathBuf,
    /// Zero-based indices of the two columns.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0, 1])]
    columns: Vec<usize>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Null correlation for a one-sample test.
    #[arg(long, allow_negative_numbers = true)]
    rho0: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "qn")]
    scale: ScaleMethod,
    #[arg(long, default_value = "spatial")]
    location: LocationMethod,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Convergence { .. } | Error::Domain { .. } => 3,
        _ => 2,
    }
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())).into()),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn experiment_settings(args: SimArgs) -> Result<(ExperimentConfig, Option<PathBuf>, bool), Failure> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Settings::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => Settings::default(),
    };
    let flags = Settings {
        dists: args.dists,
        rhos: args.rhos,
        ns: args.ns,
        estimators: args.estimators,
        reps: args.reps,
        level: args.level,
        seed: args.seed,
        threads: args.threads,
        out: args.out,
        table: args.table.then_some(true),
        scale: args.scale,
        location: args.location,
    };
    let merged = file.overridden_by(flags);
    let config = merged.experiment_config();
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((config, merged.out, merged.table.unwrap_or(false)))
}

fn simulate(args: SimArgs, metric: TableMetric) -> Result<(), Failure> {
    let (config, out, table) = experiment_settings(args)?;
    let rows = match metric {
        TableMetric::Coverage => simharness::run_coverage(&config)?,
        TableMetric::Length => simharness::run_length(&config)?,
    };
    let bytes = if table {
        render_table(&rows, metric).into_bytes()
    } else {
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows)?;
        buf
    };
    emit(out.as_ref(), &bytes)
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let rhos = if args.rhos.is_empty() { vec![0.0, 0.5] } else { args.rhos };
    let mut text = String::from("rho,n,quantity,empirical,theoretical,rel_error,mc_se\n");
    for rho in rhos {
        let opts = VerifyOptions {
            family: args.dist,
            scale: args.scale,
            location: args.location.clone(),
            threads: args.threads,
            ..VerifyOptions::new(rho, args.n, args.reps, args.seed)
        };
        let report = simharness::verify_asymptotics_with(&opts)?;
        for (name, c) in report.checks() {
            let f = simharness::format_sig6;
            text.push_str(&format!(
                "{},{},{name},{},{},{},{}\n",
                f(rho),
                args.n,
                f(c.empirical),
                f(c.theoretical),
                f(c.rel_error()),
                f(c.mc_se)
            ));
        }
    }
    emit(args.out.as_ref(), text.as_bytes())
}

fn estimate(args: EstimateArgs) -> Result<(), Failure> {
    let opts = simharness::EstimateOptions {
        scale: args.scale,
        location: args.location,
        level: args.level,
        rho0: args.rho0,
        alpha: args.alpha,
        columns: (args.columns[0], args.columns[1]),
    };
    let report = simharness::estimate_cmd(&args.input, &opts)?;
    emit(None, report.render_text().as_bytes())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::SimCoverage(a) => simulate(a, TableMetric::Coverage),
        Command::SimLength(a) => simulate(a, TableMetric::Length),
        Command::VerifyAsymptotics(a) => verify(a),
        Command::Estimate(a) => estimate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("sscor: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("sscor: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
