use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use super::transform::{asv_two_stage, h, h_inv_clamped};
use super::CorrEstimate;
use crate::{Error, Result};

/// Interval construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CiMethod {
    /// Estimate ± normal quantile · plug-in asymptotic standard error.
    Plain,
    /// Symmetric interval on the [`h`] scale, mapped back.
    HTransform,
    /// Symmetric interval on the Fisher-z scale, mapped back.
    ZTransform,
}

/// Which estimator an interval belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    SpatialSign,
    Pearson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfInterval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub method: CiMethod,
    pub estimator: Estimator,
    /// Set when an endpoint was clamped on the transformed scale or a
    /// variance factor had to be floored.
    pub flagged: bool,
    /// Width before the endpoints are clamped to `[-1, 1]`. Equals
    /// [`length`](Self::length) for back-transformed intervals.
    pub nominal_length: f64,
}

impl ConfInterval {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub alpha: f64,
    pub critical: f64,
    pub reject: bool,
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { what: "p", value: p });
    }
    let std = Normal::standard();
    Ok(std.inverse_cdf(p))
}

/// Upper tail `P(χ²₁ > t) = erfc(√(t/2))`.
pub fn chi2_1_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    erfc((t / 2.0).sqrt()).clamp(0.0, 1.0)
}

/// `χ²_{1; 1−α}`, the square of the two-sided normal quantile.
pub fn chi2_1_critical(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain { what: "alpha", value: alpha });
    }
    let z = normal_quantile(1.0 - alpha / 2.0)?;
    Ok(z * z)
}

fn check_level(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain { what: "level", value: level });
    }
    normal_quantile((1.0 + level) / 2.0)
}

/// Asymptotic confidence interval for `ρ` from a spatial sign correlation
/// estimate (plain or [`CiMethod::HTransform`]). The plain interval plugs the
/// estimate into [`asv_two_stage`].
pub fn confidence_interval(est: &CorrEstimate, level: f64, method: CiMethod) -> Result<ConfInterval> {
    let z = check_level(level)?;
    if est.n < 2 {
        return Err(Error::InvalidInput(format!("sample size must be >= 2, got {}", est.n)));
    }
    let rho = est.rho_hat;
    let n = est.n as f64;
    let (lo, hi, flagged, nominal) = match method {
        CiMethod::Plain => {
            let half = z * (asv_two_stage(rho) / n).sqrt();
            ((rho - half).max(-1.0), (rho + half).min(1.0), false, 2.0 * half)
        }
        CiMethod::HTransform => {
            let center = h(rho)?;
            let half = z / n.sqrt();
            let (lo, c_lo) = h_inv_clamped(center - half);
            let (hi, c_hi) = h_inv_clamped(center + half);
            let (lo, hi) = (lo.min(rho), hi.max(rho));
            (lo, hi, c_lo || c_hi, hi - lo)
        }
        CiMethod::ZTransform => {
            return Err(Error::InvalidInput(
                "Fisher-z intervals belong to the Pearson estimator".into(),
            ))
        }
    };
    Ok(ConfInterval {
        lo,
        hi,
        level,
        method,
        estimator: Estimator::SpatialSign,
        flagged,
        nominal_length: nominal,
    })
}

fn test_result(statistic: f64, alpha: f64) -> Result<TestResult> {
    let critical = chi2_1_critical(alpha)?;
    Ok(TestResult {
        statistic,
        df: 1,
        p_value: chi2_1_sf(statistic),
        alpha,
        critical,
        reject: statistic > critical,
    })
}

/// `T₁ = n·(h(ρ̂) − h(ρ₀))²` against `χ²₁`.
pub fn test_one_sample(est: &CorrEstimate, rho0: f64, alpha: f64) -> Result<TestResult> {
    let gap = h(est.rho_hat)? - h(rho0)?;
    test_result(est.n as f64 * gap * gap, alpha)
}

/// `T₂ = n₁n₂/(n₁+n₂)·(h(ρ̂₁) − h(ρ̂₂))²` against `χ²₁`.
pub fn test_two_sample(est1: &CorrEstimate, est2: &CorrEstimate, alpha: f64) -> Result<TestResult> {
    let gap = h(est1.rho_hat)? - h(est2.rho_hat)?;
    let (n1, n2) = (est1.n as f64, est2.n as f64);
    test_result(n1 * n2 / (n1 + n2) * gap * gap, alpha)
}
