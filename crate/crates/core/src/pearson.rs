//! Moment-correlation benchmark: Pearson's correlation, Fisher's z and the
//! multivariate kurtosis estimator used to adjust its asymptotic variance
//! `(1 + κ/3)(1 − ρ²)²` at elliptical distributions.

use nalgebra::DMatrix;

use crate::correlation::{normal_quantile, CiMethod, ConfInterval, Estimator};
use crate::{Error, Result, SampleMatrix};

/// Smallest admissible value of the kurtosis factor `1 + κ̂/3`.
const KURTOSIS_FACTOR_FLOOR: f64 = 1e-6;

/// Product-moment correlation of a two-column sample.
pub fn pearson_corr(data: &SampleMatrix) -> Result<f64> {
    if data.ncols() != 2 || data.nrows() < 2 {
        return Err(Error::InvalidInput(format!(
            "Pearson correlation needs an n x 2 sample with n >= 2, got {}x{}",
            data.nrows(),
            data.ncols()
        )));
    }
    let n = data.nrows() as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for r in data.rows() {
        mx += r[0];
        my += r[1];
    }
    mx /= n;
    my /= n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for r in data.rows() {
        let (dx, dy) = (r[0] - mx, r[1] - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateScale { column: 0 });
    }
    if syy == 0.0 {
        return Err(Error::DegenerateScale { column: 1 });
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Fisher's z-transform `½ log((1+x)/(1−x))`.
pub fn fisher_z(x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain { what: "x", value: x });
    }
    Ok(x.atanh())
}

pub fn fisher_z_inv(y: f64) -> f64 {
    y.tanh()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KurtosisEstimate {
    pub kappa_hat: f64,
    pub n: usize,
    pub p: usize,
}

/// `κ̂ = 3/(p(p+2)) · n⁻¹ Σ {(Xᵢ − X̄)ᵀ Σ̂⁻¹ (Xᵢ − X̄)}² − 3` with the
/// `n − 1` sample covariance.
pub fn kurtosis_mv(data: &SampleMatrix) -> Result<KurtosisEstimate> {
    let (n, p) = (data.nrows(), data.ncols());
    if n <= p {
        return Err(Error::InvalidInput(format!(
            "kurtosis needs more rows than columns, got {n}x{p}"
        )));
    }
    let x = DMatrix::from_row_slice(n, p, data.as_slice());
    let mean = x.row_mean();
    let mut centered = x;
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let chol = cov
        .cholesky()
        .ok_or_else(|| Error::DegenerateInput("sample covariance is singular".into()))?;
    // Rows of L⁻¹(Xᵢ − X̄) have squared norms equal to the Mahalanobis distances.
    let whitened = chol.l().solve_lower_triangular(&centered.transpose()).ok_or_else(|| {
        Error::DegenerateInput("sample covariance is singular".into())
    })?;
    let sum_sq: f64 = whitened
        .column_iter()
        .map(|c| {
            let d = c.norm_squared();
            d * d
        })
        .sum();
    let pf = p as f64;
    let kappa_hat = 3.0 / (pf * (pf + 2.0)) * sum_sq / n as f64 - 3.0;
    if !kappa_hat.is_finite() {
        return Err(Error::DegenerateInput("kurtosis is not finite".into()));
    }
    Ok(KurtosisEstimate { kappa_hat, n, p })
}

/// Kurtosis-adjusted interval for the moment correlation, plain or on the
/// Fisher-z scale. A non-positive factor `1 + κ̂/3` is floored and flagged.
pub fn ci_pearson(
    rho_hat: f64,
    kappa_hat: f64,
    n: usize,
    level: f64,
    method: CiMethod,
) -> Result<ConfInterval> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("need n >= 3, got {n}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain { what: "level", value: level });
    }
    if !(rho_hat.abs() <= 1.0) {
        return Err(Error::Domain { what: "rho_hat", value: rho_hat });
    }
    let z = normal_quantile((1.0 + level) / 2.0)?;
    let raw_factor = 1.0 + kappa_hat / 3.0;
    let flagged = !(raw_factor > KURTOSIS_FACTOR_FLOOR);
    let factor = if flagged { KURTOSIS_FACTOR_FLOOR } else { raw_factor };
    let nf = n as f64;
    let (lo, hi, nominal) = match method {
        CiMethod::Plain => {
            let u = 1.0 - rho_hat * rho_hat;
            let half = z * (factor * u * u / nf).sqrt();
            ((rho_hat - half).max(-1.0), (rho_hat + half).min(1.0), 2.0 * half)
        }
        CiMethod::ZTransform => {
            if rho_hat.abs() == 1.0 {
                (rho_hat, rho_hat, 0.0)
            } else {
                let center = rho_hat.atanh();
                let half = z * (factor / nf).sqrt();
                let (lo, hi) = (fisher_z_inv(center - half), fisher_z_inv(center + half));
                (lo, hi, hi - lo)
            }
        }
        CiMethod::HTransform => {
            return Err(Error::InvalidInput(
                "the h transform belongs to the spatial sign correlation".into(),
            ))
        }
    };
    Ok(ConfInterval {
        lo,
        hi,
        level,
        method,
        estimator: Estimator::Pearson,
        flagged,
        nominal_length: nominal,
    })
}
