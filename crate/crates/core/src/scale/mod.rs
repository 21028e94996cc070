//! Univariate scale estimators.
//!
//! Every estimator satisfies `σ(aY + b) = |a| σ(Y)`. The raw functionals are
//! returned by default; Gaussian consistency constants are opt-in through
//! [`ScaleMethod::with_consistency_constant`]. The two-stage correlation
//! divides both margins by the same functional, so a common constant has no
//! effect on it.

mod qn;

pub use qn::{qn, qn_naive};

use crate::{Error, Result};

/// Consistency constant of the MAD at the normal distribution.
pub const MAD_CONSISTENCY: f64 = 1.4826;
/// Consistency constant of Qn at the normal distribution.
pub const QN_CONSISTENCY: f64 = 2.2219;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScaleKind {
    Sd,
    Mad,
    Qn,
    /// O(n²) reference implementation of Qn.
    QnNaive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaleMethod {
    pub kind: ScaleKind,
    pub apply_consistency_constant: bool,
}

impl ScaleMethod {
    pub const fn new(kind: ScaleKind) -> Self {
        Self {
            kind,
            apply_consistency_constant: false,
        }
    }

    pub const fn sd() -> Self {
        Self::new(ScaleKind::Sd)
    }

    pub const fn mad() -> Self {
        Self::new(ScaleKind::Mad)
    }

    pub const fn qn() -> Self {
        Self::new(ScaleKind::Qn)
    }

    pub const fn with_consistency_constant(mut self) -> Self {
        self.apply_consistency_constant = true;
        self
    }

    /// Multiplier applied to the raw estimate.
    pub fn constant(&self) -> f64 {
        if !self.apply_consistency_constant {
            return 1.0;
        }
        match self.kind {
            ScaleKind::Sd => 1.0,
            ScaleKind::Mad => MAD_CONSISTENCY,
            ScaleKind::Qn | ScaleKind::QnNaive => QN_CONSISTENCY,
        }
    }

    pub fn estimate(&self, sample: &[f64]) -> Result<f64> {
        let raw = match self.kind {
            ScaleKind::Sd => sd(sample)?,
            ScaleKind::Mad => mad(sample)?,
            ScaleKind::Qn => qn(sample)?,
            ScaleKind::QnNaive => qn_naive(sample)?,
        };
        Ok(if self.apply_consistency_constant {
            raw * self.constant()
        } else {
            raw
        })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ScaleKind::Sd => "sd",
            ScaleKind::Mad => "mad",
            ScaleKind::Qn => "qn",
            ScaleKind::QnNaive => "qn_naive",
        }
    }
}

impl Default for ScaleMethod {
    fn default() -> Self {
        Self::qn()
    }
}

impl std::str::FromStr for ScaleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sd" => Ok(Self::sd()),
            "mad" => Ok(Self::mad()),
            "qn" => Ok(Self::qn()),
            "qn_naive" => Ok(Self::new(ScaleKind::QnNaive)),
            other => Err(Error::InvalidInput(format!("unknown scale method '{other}'"))),
        }
    }
}

pub(crate) fn check_sample(sample: &[f64], min_len: usize) -> Result<()> {
    if sample.len() < min_len {
        return Err(Error::InvalidInput(format!(
            "need at least {min_len} observations, got {}",
            sample.len()
        )));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("sample has non-finite entries".into()));
    }
    Ok(())
}

/// Median of a sorted slice; even lengths average the two central values.
pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Sample median; even lengths average the two central order statistics.
pub fn median(sample: &[f64]) -> Result<f64> {
    check_sample(sample, 1)?;
    let mut v = sample.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    Ok(median_of_sorted(&v))
}

/// Standard deviation with the `n − 1` denominator.
pub fn sd(sample: &[f64]) -> Result<f64> {
    check_sample(sample, 2)?;
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let ss: f64 = sample.iter().map(|y| (y - mean) * (y - mean)).sum();
    Ok((ss / (n - 1.0)).sqrt())
}

/// Median absolute deviation from the median (raw, no constant).
pub fn mad(sample: &[f64]) -> Result<f64> {
    let center = median(sample)?;
    let mut dev: Vec<f64> = sample.iter().map(|y| (y - center).abs()).collect();
    dev.sort_unstable_by(f64::total_cmp);
    Ok(median_of_sorted(&dev))
}
