use rayon::prelude::*;

use super::{mix64, thread_pool};
use crate::correlation::{asv_two_stage, sscor_two_stage};
use crate::elliptical::{sample, EllipticalSpec, Family, SeedSpec};
use crate::location::LocationMethod;
use crate::scale::ScaleMethod;
use crate::signs::asym_constants;
use crate::summation::compensated_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub rho: f64,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub family: Family,
    pub scale: ScaleMethod,
    pub location: LocationMethod,
    pub threads: Option<usize>,
}

impl VerifyOptions {
    pub fn new(rho: f64, n: usize, reps: usize, master_seed: u64) -> Self {
        Self {
            rho,
            n,
            reps,
            master_seed,
            family: Family::Normal,
            scale: ScaleMethod::qn(),
            location: LocationMethod::SpatialMedian,
            threads: None,
        }
    }
}

/// An empirical quantity next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub empirical: f64,
    pub theoretical: f64,
    /// Monte Carlo standard error of `empirical`.
    pub mc_se: f64,
}

impl Check {
    pub fn rel_error(&self) -> f64 {
        (self.empirical - self.theoretical).abs() / self.theoretical.abs()
    }

    /// `|empirical − theoretical|` in units of the Monte Carlo SE.
    pub fn z_score(&self) -> f64 {
        (self.empirical - self.theoretical).abs() / self.mc_se
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub rho: f64,
    pub n: usize,
    pub reps: usize,
    pub failures: usize,
    /// Variance of `√n(ρ̂ − ρ)` against `(1−ρ²)² + (1−ρ²)^{3/2}`.
    pub var_rho: Check,
    /// Fourth moments of the spatial signs at the true centre against α, β, γ.
    pub alpha: Check,
    pub beta: Check,
    pub gamma: Check,
    /// Variance of `√n(ŝ₁₂ − δ)` against `w`.
    pub var_s12: Check,
}

impl AsymptoticsReport {
    pub fn checks(&self) -> [(&'static str, Check); 5] {
        [
            ("var_sqrt_n_rho", self.var_rho),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("var_sqrt_n_s12", self.var_s12),
        ]
    }
}

struct RepStats {
    rho_dev: f64,
    s12_dev: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
}

/// Mean and standard error of the mean.
fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let var = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample variance (about the sample mean) and its standard error.
fn variance_se(values: &[f64]) -> (f64, f64) {
    let (mean, _) = mean_se(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let (m2, se) = mean_se(&sq);
    let n = values.len() as f64;
    (m2 * n / (n - 1.0), se)
}

/// Monte Carlo check of the asymptotic variance and the constants behind it
/// at a Gaussian population with unit marginal scales.
pub fn verify_asymptotics(rho: f64, n: usize, reps: usize, seed: u64) -> Result<AsymptoticsReport> {
    verify_asymptotics_with(&VerifyOptions::new(rho, n, reps, seed))
}

pub fn verify_asymptotics_with(opts: &VerifyOptions) -> Result<AsymptoticsReport> {
    if opts.reps < 2 || opts.n < 2 {
        return Err(Error::InvalidInput("need reps >= 2 and n >= 2".into()));
    }
    let constants = asym_constants(opts.rho)?;
    let spec = EllipticalSpec::standard(opts.family, opts.rho);
    spec.validate()?;
    let stream_base = mix64(opts.rho.to_bits() ^ mix64(opts.n as u64));
    let sqrt_n = (opts.n as f64).sqrt();

    let pool = thread_pool(opts.threads)?;
    let per_rep: Vec<Result<Option<RepStats>>> = pool.install(|| {
        (0..opts.reps as u64)
            .into_par_iter()
            .map(|r| {
                let seed = SeedSpec::new(opts.master_seed, mix64(stream_base ^ mix64(r)));
                let data = sample(&spec, opts.n, seed)?;
                let est = match sscor_two_stage(&data, opts.scale, &opts.location) {
                    Ok(est) => est,
                    Err(Error::Convergence { .. }) | Err(Error::DegenerateScale { .. }) => {
                        return Ok(None)
                    }
                    Err(e) => return Err(e),
                };
                // Signs at the true centre with the true (unit) scales.
                let (mut a, mut b, mut g) = (0.0, 0.0, 0.0);
                for x in data.rows() {
                    let sq = x[0] * x[0] + x[1] * x[1];
                    if sq == 0.0 {
                        continue;
                    }
                    let (s1s, s2s, s12) = (x[0] * x[0] / sq, x[1] * x[1] / sq, x[0] * x[1] / sq);
                    a += (s1s * s1s + s2s * s2s) / 2.0;
                    b += s12 * (s1s + s2s) / 2.0;
                    g += s1s * s2s;
                }
                let nf = opts.n as f64;
                Ok(Some(RepStats {
                    rho_dev: sqrt_n * (est.rho_hat - opts.rho),
                    s12_dev: sqrt_n * (est.sscm.get(0, 1) - constants.delta),
                    alpha: a / nf,
                    beta: b / nf,
                    gamma: g / nf,
                }))
            })
            .collect()
    });

    let mut stats = Vec::with_capacity(opts.reps);
    for r in per_rep {
        if let Some(s) = r? {
            stats.push(s);
        }
    }
    if stats.len() < 2 {
        return Err(Error::DegenerateInput("fewer than two successful replications".into()));
    }
    let column = |f: fn(&RepStats) -> f64| stats.iter().map(f).collect::<Vec<f64>>();

    let (v_rho, v_rho_se) = variance_se(&column(|s| s.rho_dev));
    let (v_s12, v_s12_se) = variance_se(&column(|s| s.s12_dev));
    let (a, a_se) = mean_se(&column(|s| s.alpha));
    let (b, b_se) = mean_se(&column(|s| s.beta));
    let (g, g_se) = mean_se(&column(|s| s.gamma));

    Ok(AsymptoticsReport {
        rho: opts.rho,
        n: opts.n,
        reps: opts.reps,
        failures: opts.reps - stats.len(),
        var_rho: Check {
            empirical: v_rho,
            theoretical: asv_two_stage(opts.rho),
            mc_se: v_rho_se,
        },
        alpha: Check { empirical: a, theoretical: constants.alpha, mc_se: a_se },
        beta: Check { empirical: b, theoretical: constants.beta, mc_se: b_se },
        gamma: Check { empirical: g, theoretical: constants.gamma, mc_se: g_se },
        var_s12: Check {
            empirical: v_s12,
            theoretical: constants.w,
            mc_se: v_s12_se,
        },
    })
}
