//! Spatial sign correlation and its inference.
//!
//! The one-stage estimator inverts the bivariate SSCM of the raw data. The
//! two-stage estimator first divides each margin by a robust scale estimate,
//! estimates the location on the standardised data and then inverts the SSCM
//! there. Its asymptotic variance `(1−ρ²)² + (1−ρ²)^{3/2}` depends on `ρ`
//! only, which is what makes [`h`] a variance-stabilising transform.

mod inference;
mod transform;

pub use inference::{
    chi2_1_critical, chi2_1_sf, confidence_interval, normal_quantile, test_one_sample,
    test_two_sample, CiMethod, ConfInterval, Estimator, TestResult,
};
pub use transform::{asv_one_stage, asv_two_stage, h, h_inv, h_inv_clamped, H_BOUND};

use crate::location::LocationMethod;
use crate::scale::{median_of_sorted, ScaleMethod};
use crate::signs::sscm;
use crate::{Error, Result, SampleMatrix, SymMat};

/// Below this value of `d(1−d)` the SSCM is treated as rank-deficient.
const DEGENERATE_EPS: f64 = 1e-12;
const TRACE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    OneStage,
    TwoStage,
}

/// A spatial sign correlation estimate together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrEstimate {
    pub rho_hat: f64,
    pub n: usize,
    pub stage: Stage,
    /// `None` for the one-stage estimator.
    pub scale_method: Option<ScaleMethod>,
    pub location_method: LocationMethod,
    pub sscm: SymMat,
}

impl CorrEstimate {
    /// An estimate carrying only `rho_hat` and `n`, for driving the inference
    /// functions with externally computed values.
    pub fn from_value(rho_hat: f64, n: usize) -> Result<Self> {
        if !(rho_hat.abs() <= 1.0) {
            return Err(Error::Domain { what: "rho_hat", value: rho_hat });
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!("sample size must be >= 2, got {n}")));
        }
        Ok(Self {
            rho_hat,
            n,
            stage: Stage::TwoStage,
            scale_method: None,
            location_method: LocationMethod::SpatialMedian,
            sscm: SymMat::zeros(2),
        })
    }
}

/// Inverts the bivariate SSCM map to a generalized correlation coefficient.
///
/// `S` is first scaled to unit trace. With `d = 1/2 + √((s₁₁−1/2)² + s₁₂²)`, `b = d − s₁₁` and
/// `c = (2d−1)/(d(1−d))` the estimate is
/// `c·b·s₁₂ / √((s₁₂² + b²)² + (s₁₂·c·b)²)`. A rank-deficient SSCM maps to
/// `±1` by the sign of `s₁₂`.
pub fn rho_from_sscm(s: &SymMat) -> Result<f64> {
    if s.dim() != 2 {
        return Err(Error::InvalidInput(format!("expected a 2x2 SSCM, got {0}x{0}", s.dim())));
    }
    let (s11, s12, s22) = (s.get(0, 0), s.get(0, 1), s.get(1, 1));
    if ![s11, s12, s22].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("SSCM has non-finite entries".into()));
    }
    for (name, v) in [("s11", s11), ("s22", s22)] {
        if !(-TRACE_SLACK..=1.0 + TRACE_SLACK).contains(&v) {
            return Err(Error::InvalidInput(format!("{name} = {v} is outside [0, 1]")));
        }
    }
    if s11 + s22 > 1.0 + TRACE_SLACK {
        return Err(Error::InvalidInput(format!("SSCM trace {} exceeds 1", s11 + s22)));
    }
    let trace = s11 + s22;
    if s12 == 0.0 || trace <= 0.0 {
        return Ok(0.0);
    }
    // Rows sitting on the location have a zero sign and pull the trace below
    // one; the inversion is applied to S / tr(S).
    let e = (s11 - s22) / (2.0 * trace);
    let s12 = s12 / trace;
    let q = e.hypot(s12);
    let d = 0.5 + q;
    let one_minus_d = 0.5 - q;
    if d * one_minus_d < DEGENERATE_EPS {
        return Ok(s12.signum());
    }
    // b = q − e, computed without cancellation when e > 0.
    let b = if e <= 0.0 { q - e } else { s12 * s12 / (q + e) };
    let c = 2.0 * q / (d * one_minus_d);

    // Divide through by max(|s₁₂|, b)² so that tiny entries cannot underflow.
    let m = s12.abs().max(b);
    let (u, v) = (s12 / m, b / m);
    let uv = u * v;
    let rho = c * uv / ((u * u + v * v).powi(2) + (c * uv).powi(2)).sqrt();
    Ok(rho.clamp(-1.0, 1.0))
}

fn require_bivariate(data: &SampleMatrix) -> Result<()> {
    if data.ncols() != 2 {
        return Err(Error::InvalidInput(format!(
            "correlation needs exactly 2 columns, got {}",
            data.ncols()
        )));
    }
    if data.nrows() < 2 {
        return Err(Error::InvalidInput(format!(
            "correlation needs at least 2 rows, got {}",
            data.nrows()
        )));
    }
    Ok(())
}

/// Spatial sign correlation of the raw data.
pub fn sscor_one_stage(data: &SampleMatrix, location: &LocationMethod) -> Result<CorrEstimate> {
    require_bivariate(data)?;
    let t = location.estimate(data)?;
    let s = sscm(data, &t)?;
    Ok(CorrEstimate {
        rho_hat: rho_from_sscm(&s)?,
        n: data.nrows(),
        stage: Stage::OneStage,
        scale_method: None,
        location_method: location.clone(),
        sscm: s,
    })
}

/// Marginal standardisation `(x − med_j) / σ̂_j`.
///
/// Centering at the column median leaves the estimator unchanged (the
/// location is re-estimated afterwards) and makes the standardised sample
/// bit-identical under `x ↦ a·x + b` whenever that map is exact in floating
/// point.
pub fn standardize(data: &SampleMatrix, scale: ScaleMethod) -> Result<SampleMatrix> {
    let p = data.ncols();
    let mut centers = Vec::with_capacity(p);
    let mut scales = Vec::with_capacity(p);
    for j in 0..p {
        let col = data.column(j);
        let sigma = scale.estimate(&col)?;
        if !(sigma > 0.0) {
            return Err(Error::DegenerateScale { column: j });
        }
        let mut sorted = col;
        sorted.sort_unstable_by(f64::total_cmp);
        centers.push(median_of_sorted(&sorted));
        scales.push(sigma);
    }
    data.map_entries(|j, v| (v - centers[j]) / scales[j])
}

/// Two-stage spatial sign correlation: standardise the margins, then
/// estimate the location on the standardised data, then invert the SSCM.
pub fn sscor_two_stage(
    data: &SampleMatrix,
    scale: ScaleMethod,
    location: &LocationMethod,
) -> Result<CorrEstimate> {
    require_bivariate(data)?;
    let z = standardize(data, scale)?;
    let location = match location {
        // A fixed centre refers to the raw data and is carried along.
        LocationMethod::Fixed(_) => {
            let t = location.estimate(data)?;
            let centered = standardize_point(data, scale, &t)?;
            LocationMethod::Fixed(centered)
        }
        other => other.clone(),
    };
    let t = location.estimate(&z)?;
    let s = sscm(&z, &t)?;
    Ok(CorrEstimate {
        rho_hat: rho_from_sscm(&s)?,
        n: data.nrows(),
        stage: Stage::TwoStage,
        scale_method: Some(scale),
        location_method: location,
        sscm: s,
    })
}

fn standardize_point(data: &SampleMatrix, scale: ScaleMethod, t: &[f64]) -> Result<Vec<f64>> {
    (0..data.ncols())
        .map(|j| {
            let mut col = data.column(j);
            let sigma = scale.estimate(&col)?;
            col.sort_unstable_by(f64::total_cmp);
            Ok((t[j] - median_of_sorted(&col)) / sigma)
        })
        .collect()
}
