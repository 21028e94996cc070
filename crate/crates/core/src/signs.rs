//! Spatial signs and the spatial sign covariance matrix (SSCM).
//!
//! Besides the empirical SSCM this module carries the closed-form bivariate
//! quantities at an elliptical distribution with equal marginal scales: the
//! population SSCM `[[1/2, δ], [δ, 1/2]]` and the fourth-moment constants of
//! the spatial signs that drive the asymptotic variance of the correlation
//! estimator.

use crate::summation::CompensatedSum;
use crate::{Error, Result};

/// Below this magnitude the correlation-dependent constants use their limits
/// at zero.
const ZERO_RHO_CUTOFF: f64 = 1e-7;

/// An `n × p` array of finite observations, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SampleMatrix {
    /// Builds a matrix from row-major values.
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "sample matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} values for a {rows}x{cols} matrix, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite entry at row {}, column {}",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, values)
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        if columns.iter().any(|c| c.as_ref().len() != rows) {
            return Err(Error::InvalidInput("columns differ in length".into()));
        }
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            values.extend(columns.iter().map(|c| c.as_ref()[i]));
        }
        Self::new(rows, cols, values)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Applies `f(column, value)` to every entry.
    pub fn map_entries(&self, mut f: impl FnMut(usize, f64) -> f64) -> Result<Self> {
        let cols = self.cols;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| f(idx % cols, v))
            .collect();
        Self::new(self.rows, cols, values)
    }

    /// Swaps two columns.
    pub fn swap_columns(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        for row in out.values.chunks_exact_mut(self.cols) {
            row.swap(a, b);
        }
        out
    }
}

/// A small symmetric `p × p` matrix holding only its upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    dim: usize,
    upper: Vec<f64>,
}

impl SymMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    /// 2×2 matrix `[[s11, s12], [s12, s22]]`.
    pub fn from_2x2(s11: f64, s12: f64, s22: f64) -> Self {
        Self {
            dim: 2,
            upper: vec![s11, s12, s22],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // Row-major packed upper triangle.
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.index(i, j);
        self.upper[idx] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SymMat) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

fn ensure_finite(x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("vector has non-finite entries".into()))
    }
}

/// `x / |x|`, or the zero vector for `x = 0`.
pub fn spatial_sign(x: &[f64]) -> Result<Vec<f64>> {
    ensure_finite(x)?;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    Ok(x.iter().map(|v| v / norm).collect())
}

/// Empirical SSCM `n⁻¹ Σ s(Xᵢ − t) s(Xᵢ − t)ᵀ`.
///
/// Rows equal to the location contribute the zero matrix, so the trace is the
/// fraction of rows different from `location`.
pub fn sscm(data: &SampleMatrix, location: &[f64]) -> Result<SymMat> {
    let p = data.ncols();
    if location.len() != p {
        return Err(Error::InvalidInput(format!(
            "location has dimension {}, data has {p} columns",
            location.len()
        )));
    }
    ensure_finite(location)?;

    let mut acc = vec![CompensatedSum::new(); p * (p + 1) / 2];
    let mut diff = vec![0.0; p];
    for row in data.rows() {
        for ((d, x), t) in diff.iter_mut().zip(row).zip(location) {
            *d = x - t;
        }
        let sq: f64 = diff.iter().map(|d| d * d).sum();
        if sq == 0.0 {
            continue;
        }
        let mut k = 0;
        for i in 0..p {
            for j in i..p {
                acc[k].add(diff[i] * diff[j] / sq);
                k += 1;
            }
        }
    }

    let n = data.nrows() as f64;
    Ok(SymMat {
        dim: p,
        upper: acc.iter().map(|a| a.value() / n).collect(),
    })
}

/// Off-diagonal entry `δ` of the bivariate population SSCM at correlation `rho`
/// and equal marginal scales.
fn sscm_delta(rho: f64) -> f64 {
    // (1 − √(1−ρ²)) / (2ρ) rewritten without cancellation.
    rho / (2.0 * (1.0 + (1.0 - rho * rho).sqrt()))
}

/// Population SSCM `[[1/2, δ], [δ, 1/2]]` of a bivariate elliptical
/// distribution with equal marginal scales and generalized correlation `rho`.
pub fn theoretical_sscm(rho: f64) -> Result<SymMat> {
    if !(rho.abs() <= 1.0) {
        return Err(Error::Domain { what: "rho", value: rho });
    }
    let delta = if rho.abs() < ZERO_RHO_CUTOFF {
        0.0
    } else {
        sscm_delta(rho)
    };
    Ok(SymMat::from_2x2(0.5, delta, 0.5))
}

/// Closed-form bivariate constants at equal marginal scales.
///
/// * `delta`: off-diagonal of the population SSCM,
/// * `zeta`: factor of the scale-estimation term in the diagonal of the
///   two-stage SSCM limit,
/// * `alpha`, `beta`, `gamma`: `E[s₁⁴]`, `E[s₁³s₂]`, `E[s₁²s₂²]` of the
///   spatial sign,
/// * `w`: asymptotic variance of `√n(ŝ₁₂ − δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymConstants {
    pub rho: f64,
    pub delta: f64,
    pub zeta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub w: f64,
}

/// Evaluates [`AsymConstants`] for `|rho| < 1`.
pub fn asym_constants(rho: f64) -> Result<AsymConstants> {
    if !(rho.abs() < 1.0) {
        return Err(Error::Domain { what: "rho", value: rho });
    }
    if rho.abs() < ZERO_RHO_CUTOFF {
        return Ok(AsymConstants {
            rho,
            delta: 0.0,
            zeta: 0.25,
            alpha: 0.375,
            beta: 0.0,
            gamma: 0.125,
            w: 0.125,
        });
    }
    // With r = √(1−ρ²) and 1 − r = ρ²/(1 + r) every constant has a form
    // free of the 0/0 at ρ → 0.
    let r = (1.0 - rho * rho).sqrt();
    let one_plus_r = 1.0 + r;
    let delta = sscm_delta(rho);
    let gamma = 0.25 / one_plus_r;
    Ok(AsymConstants {
        rho,
        delta,
        zeta: 0.5 / one_plus_r,
        alpha: 0.5 - gamma,
        beta: delta / 2.0,
        gamma,
        w: 0.25 * r / one_plus_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spatial_sign_examples() {
        assert_eq!(spatial_sign(&[3.0, 4.0]).unwrap(), vec![0.6, 0.8]);
        assert_eq!(spatial_sign(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(spatial_sign(&[-2.0, 0.0]).unwrap(), vec![-1.0, 0.0]);
        assert!(spatial_sign(&[f64::NAN, 1.0]).is_err());
        assert!(spatial_sign(&[f64::INFINITY, 1.0]).is_err());
    }

    #[test]
    fn sscm_examples() {
        let origin = [0.0, 0.0];
        let axis = SampleMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(sscm(&axis, &origin).unwrap(), SymMat::from_2x2(1.0, 0.0, 0.0));

        let orth = SampleMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(sscm(&orth, &origin).unwrap(), SymMat::from_2x2(0.5, 0.0, 0.5));

        let with_zero = SampleMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let s = sscm(&with_zero, &origin).unwrap();
        assert_eq!(s, SymMat::from_2x2(0.5, 0.0, 0.0));
        assert_eq!(s.trace(), 0.5);
    }

    #[test]
    fn sscm_rejects_mismatched_location() {
        let data = SampleMatrix::from_rows(&[[1.0, 0.0]]).unwrap();
        assert!(sscm(&data, &[0.0]).is_err());
    }

    #[test]
    fn sample_matrix_validation() {
        assert!(SampleMatrix::new(0, 2, vec![]).is_err());
        assert!(SampleMatrix::new(1, 2, vec![1.0]).is_err());
        assert!(SampleMatrix::new(1, 2, vec![1.0, f64::NAN]).is_err());
        let m = SampleMatrix::from_columns(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.row(1), &[2.0, 4.0]);
        assert_eq!(m.column(1), vec![3.0, 4.0]);
    }

    #[test]
    fn symmat_packed_indexing() {
        let mut m = SymMat::zeros(3);
        let mut v = 1.0;
        for i in 0..3 {
            for j in i..3 {
                m.set(i, j, v);
                v += 1.0;
            }
        }
        assert_eq!(
            m.to_dense(),
            vec![
                vec![1.0, 2.0, 3.0],
                vec![2.0, 4.0, 5.0],
                vec![3.0, 5.0, 6.0]
            ]
        );
        assert_eq!(m.trace(), 11.0);
    }

    #[test]
    fn theoretical_sscm_examples() {
        assert_eq!(theoretical_sscm(0.0).unwrap(), SymMat::from_2x2(0.5, 0.0, 0.5));
        let half = theoretical_sscm(0.5).unwrap();
        assert!((half.get(0, 1) - 0.1339746).abs() < 1e-7);
        assert_eq!(theoretical_sscm(1.0).unwrap().get(0, 1), 0.5);
        assert_eq!(theoretical_sscm(-1.0).unwrap().get(0, 1), -0.5);
        assert!(theoretical_sscm(1.01).is_err());
        assert!(theoretical_sscm(f64::NAN).is_err());
    }

    #[test]
    fn asym_constants_at_zero() {
        let c = asym_constants(0.0).unwrap();
        assert_eq!(
            (c.delta, c.zeta, c.alpha, c.beta, c.gamma, c.w),
            (0.0, 0.25, 0.375, 0.0, 0.125, 0.125)
        );
    }

    #[test]
    fn asym_constants_match_unsimplified_formulas() {
        // Textbook forms, evaluated where cancellation is harmless.
        for &rho in &[0.5f64, -0.3, 0.8, 0.95, -0.99] {
            let r = (1.0 - rho * rho).sqrt();
            let c = asym_constants(rho).unwrap();
            let rho2 = rho * rho;
            assert!((c.delta - (1.0 - r) / (2.0 * rho)).abs() < 1e-13);
            assert!((c.zeta - (1.0 - r) / (2.0 * rho2)).abs() < 1e-13);
            assert!((c.alpha - (r + 2.0 * rho2 - 1.0) / (4.0 * rho2)).abs() < 1e-13);
            assert!((c.beta - (1.0 - r) / (4.0 * rho)).abs() < 1e-13);
            assert!((c.gamma - (1.0 - r) / (4.0 * rho2)).abs() < 1e-13);
            assert!((c.w - (r + rho2 - 1.0) / (4.0 * rho2)).abs() < 1e-13);
        }
    }

    #[test]
    fn asym_constants_at_half() {
        let c = asym_constants(0.5).unwrap();
        assert!((c.alpha - 0.3660254).abs() < 1e-7);
        assert!((c.beta - 0.0669873).abs() < 1e-7);
        assert!((c.gamma - 0.1339746).abs() < 1e-7);
        assert!((c.zeta - 0.2679492).abs() < 1e-7);
        assert!((c.w - 0.1160254).abs() < 1e-7);
    }

    #[test]
    fn asym_constants_identities_on_grid() {
        for k in -99..=99 {
            let rho = k as f64 / 100.0;
            let c = asym_constants(rho).unwrap();
            assert!((c.alpha + c.gamma - 0.5).abs() < 1e-12, "rho={rho}");
            assert!((c.zeta - 2.0 * c.gamma).abs() < 1e-12, "rho={rho}");
            assert!((c.w - (c.gamma - c.delta * c.delta)).abs() < 1e-12, "rho={rho}");
            assert!((c.beta - c.delta / 2.0).abs() < 1e-12, "rho={rho}");
        }
    }

    #[test]
    fn asym_constants_continuous_at_zero() {
        let c = asym_constants(1e-8).unwrap();
        assert!((c.zeta - 0.25).abs() < 1e-6);
        assert!((c.alpha - 0.375).abs() < 1e-6);
        assert!((c.gamma - 0.125).abs() < 1e-6);
        assert!((c.w - 0.125).abs() < 1e-6);
        // Just above the cutoff the generic branch agrees with the limits.
        let c = asym_constants(2e-7).unwrap();
        assert!((c.zeta - 0.25).abs() < 1e-12);
        assert!((c.w - 0.125).abs() < 1e-12);
    }

    #[test]
    fn asym_constants_domain() {
        assert!(asym_constants(1.0).is_err());
        assert!(asym_constants(-1.0).is_err());
        assert!(asym_constants(f64::NAN).is_err());
    }
}
