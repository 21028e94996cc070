//! Multivariate location estimators.

use nalgebra::{DMatrix, DVector};

use crate::scale::median_of_sorted;
use crate::{Error, Result, SampleMatrix};

/// Default relative tolerance of the spatial median iteration.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap of the spatial median iteration.
pub const DEFAULT_MAX_ITER: usize = 500;

/// How the centre `t` of the spatial signs is obtained.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum LocationMethod {
    #[default]
    SpatialMedian,
    CoordinatewiseMedian,
    Fixed(Vec<f64>),
}

impl LocationMethod {
    pub fn estimate(&self, data: &SampleMatrix) -> Result<Vec<f64>> {
        match self {
            LocationMethod::SpatialMedian => spatial_median(data, DEFAULT_TOL, DEFAULT_MAX_ITER),
            LocationMethod::CoordinatewiseMedian => Ok(coordinatewise_median(data)),
            LocationMethod::Fixed(t) => {
                if t.len() != data.ncols() {
                    return Err(Error::InvalidInput(format!(
                        "fixed location has dimension {}, data has {} columns",
                        t.len(),
                        data.ncols()
                    )));
                }
                if t.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("fixed location is not finite".into()));
                }
                Ok(t.clone())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LocationMethod::SpatialMedian => "spatial",
            LocationMethod::CoordinatewiseMedian => "coordwise",
            LocationMethod::Fixed(_) => "fixed",
        }
    }
}

impl std::str::FromStr for LocationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spatial" | "spatial_median" => Ok(LocationMethod::SpatialMedian),
            "coordwise" | "coordinatewise_median" => Ok(LocationMethod::CoordinatewiseMedian),
            other => Err(Error::InvalidInput(format!("unknown location method '{other}'"))),
        }
    }
}

/// Median of every column.
pub fn coordinatewise_median(data: &SampleMatrix) -> Vec<f64> {
    (0..data.ncols())
        .map(|j| {
            let mut col = data.column(j);
            col.sort_unstable_by(f64::total_cmp);
            median_of_sorted(&col)
        })
        .collect()
}

/// Sum of Euclidean distances from `t` to the rows of `data`.
pub fn l1_objective(data: &SampleMatrix, t: &[f64]) -> f64 {
    data.rows().map(|x| distance(x, t)).sum()
}

fn distance(x: &[f64], t: &[f64]) -> f64 {
    x.iter()
        .zip(t)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// One sweep over the data at the current iterate.
struct Sweep {
    /// `Σ xᵢ/dᵢ / Σ 1/dᵢ` over rows not at the iterate.
    weiszfeld: Vec<f64>,
    /// `‖Σ (xᵢ − y)/dᵢ‖` over rows not at the iterate.
    resultant: f64,
    /// Rows coinciding with the iterate.
    coincident: usize,
    /// Closest row not at the iterate, with its distance.
    nearest: Option<(usize, f64)>,
    /// `Σ (xᵢ − y)/dᵢ`, the negative gradient of the objective.
    pull: Vec<f64>,
    /// `Σ (I − uᵢuᵢᵀ)/dᵢ`, row-major, with `uᵢ = (xᵢ − y)/dᵢ`.
    hessian: Vec<f64>,
}

fn sweep(data: &SampleMatrix, y: &[f64]) -> Sweep {
    let p = data.ncols();
    let mut num = vec![0.0; p];
    let mut pull = vec![0.0; p];
    let mut hessian = vec![0.0; p * p];
    let mut denom = 0.0;
    let mut coincident = 0;
    let mut nearest: Option<(usize, f64)> = None;
    for (i, x) in data.rows().enumerate() {
        let d = distance(x, y);
        if d == 0.0 {
            coincident += 1;
            continue;
        }
        if nearest.is_none_or(|(_, best)| d < best) {
            nearest = Some((i, d));
        }
        let w = 1.0 / d;
        denom += w;
        for k in 0..p {
            num[k] += x[k] * w;
            pull[k] += (x[k] - y[k]) * w;
        }
        for a in 0..p {
            let ua = (x[a] - y[a]) * w;
            for b in 0..p {
                let ub = (x[b] - y[b]) * w;
                let identity = if a == b { 1.0 } else { 0.0 };
                hessian[a * p + b] += (identity - ua * ub) * w;
            }
        }
    }
    let weiszfeld = if denom > 0.0 {
        num.iter().map(|v| v / denom).collect()
    } else {
        y.to_vec()
    };
    Sweep {
        weiszfeld,
        resultant: pull.iter().map(|v| v * v).sum::<f64>().sqrt(),
        coincident,
        nearest,
        pull,
        hessian,
    }
}

/// Spatial (L1) median: the minimiser of `Σ ‖xᵢ − t‖`.
///
/// Weiszfeld iteration started at the coordinatewise median. Each step takes
/// the Newton point instead when it has the lower objective, and the
/// Vardi-Zhang step whenever the iterate sits on data points: with `η`
/// coincident rows and resultant `r` of the unit vectors towards the others,
/// the iterate is optimal if `r ≤ η`, otherwise it moves to
/// `(1 − η/r)·T + (η/r)·y`. Iteration stops once a step is shorter than
/// `tol` times the median distance of the rows to the starting point.
pub fn spatial_median(data: &SampleMatrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut y = coordinatewise_median(data);
    if data.nrows() == 1 {
        return Ok(y);
    }

    let mut dists: Vec<f64> = data.rows().map(|x| distance(x, &y)).collect();
    dists.sort_unstable_by(f64::total_cmp);
    let mut scale = median_of_sorted(&dists);
    if scale == 0.0 {
        scale = dists.iter().sum::<f64>() / dists.len() as f64;
    }
    if scale == 0.0 {
        // All rows identical.
        return Ok(y);
    }
    let step_tol = tol * scale;

    let mut residual = f64::INFINITY;
    let mut tested = None;
    let mut polished = false;
    for _ in 0..max_iter {
        let s = sweep(data, &y);
        let next: Vec<f64> = if s.coincident == 0 {
            // Objective ties within rounding go to Newton, which keeps
            // converging where the objective can no longer tell them apart.
            match newton_point(&s, &y) {
                Some(nt) => {
                    let fw = l1_objective(data, &s.weiszfeld);
                    if l1_objective(data, &nt) <= fw * (1.0 + 8.0 * f64::EPSILON) {
                        nt
                    } else {
                        s.weiszfeld
                    }
                }
                None => s.weiszfeld,
            }
        } else {
            let eta = s.coincident as f64;
            if s.resultant <= eta {
                return Ok(y);
            }
            let keep = eta / s.resultant;
            s.weiszfeld
                .iter()
                .zip(&y)
                .map(|(t, yk)| (1.0 - keep) * t + keep * yk)
                .collect()
        };
        let step = distance(&next, &y);
        residual = step / scale;
        // Weiszfeld creeps towards an optimal data point sublinearly, so the
        // nearest row is tested whenever it changes.
        if let Some((i, _)) = s.nearest {
            if tested != Some(i) {
                tested = Some(i);
                if is_optimal_row(data, data.row(i)) {
                    return Ok(data.row(i).to_vec());
                }
            }
        }
        y = next;
        if step <= step_tol {
            if polished {
                snap_to_optimal_row(data, &mut y, step_tol);
                return Ok(y);
            }
            // One more step: it is quadratic when Newton is taken.
            polished = true;
        }
    }
    Err(Error::Convergence {
        iterate: y,
        residual,
        iterations: max_iter,
    })
}

/// `y + H⁻¹·pull`, or `None` when the Hessian is singular.
fn newton_point(s: &Sweep, y: &[f64]) -> Option<Vec<f64>> {
    let p = y.len();
    let h = DMatrix::from_row_slice(p, p, &s.hessian);
    let step = h.cholesky()?.solve(&DVector::from_column_slice(&s.pull));
    let next: Vec<f64> = y.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
    next.iter().all(|v| v.is_finite()).then_some(next)
}

/// Vardi-Zhang optimality of a data point `x`.
fn is_optimal_row(data: &SampleMatrix, x: &[f64]) -> bool {
    let s = sweep(data, x);
    s.resultant <= s.coincident as f64
}

/// Replaces a converged iterate by a nearby row when that row passes the
/// Vardi-Zhang optimality test.
fn snap_to_optimal_row(data: &SampleMatrix, y: &mut Vec<f64>, radius: f64) {
    let nearest = data
        .rows()
        .map(|x| (distance(x, y), x))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((d, x)) = nearest {
        if d > 0.0 && d <= radius && is_optimal_row(data, x) {
            *y = x.to_vec();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> SampleMatrix {
        SampleMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn coordinatewise_median_examples() {
        assert_eq!(
            coordinatewise_median(&m(&[[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]])),
            vec![2.0, 20.0]
        );
        assert_eq!(coordinatewise_median(&m(&[[1.0, 0.0], [3.0, 0.0]])), vec![2.0, 0.0]);
        assert_eq!(coordinatewise_median(&m(&[[5.0, 5.0]])), vec![5.0, 5.0]);
    }

    #[test]
    fn spatial_median_symmetric_cross() {
        let data = m(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
        let t = spatial_median(&data, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(t[0].abs() < 1e-12 && t[1].abs() < 1e-12);
    }

    #[test]
    fn spatial_median_collinear_is_univariate_median() {
        let data = m(&[[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]]);
        assert_eq!(
            spatial_median(&data, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap(),
            vec![1.0, 0.0]
        );
    }

    #[test]
    fn spatial_median_repeated_point() {
        let data = m(&[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        let t = spatial_median(&data, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(t, vec![0.0, 0.0]);

        // Brute-force objective on a grid over [-1, 2]^2 at step 1e-3.
        let mut best = (f64::INFINITY, [0.0, 0.0]);
        for a in 0..=3000 {
            for b in 0..=3000 {
                let c = [-1.0 + a as f64 * 1e-3, -1.0 + b as f64 * 1e-3];
                let f = l1_objective(&data, &c);
                if f < best.0 {
                    best = (f, c);
                }
            }
        }
        assert!(best.1[0].abs() < 1e-9 && best.1[1].abs() < 1e-9);
    }

    #[test]
    fn spatial_median_single_and_identical_rows() {
        assert_eq!(
            spatial_median(&m(&[[3.0, -2.0]]), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap(),
            vec![3.0, -2.0]
        );
        assert_eq!(
            spatial_median(&m(&[[1.5, 2.0]; 5]), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap(),
            vec![1.5, 2.0]
        );
    }

    #[test]
    fn spatial_median_reports_non_convergence() {
        let data = m(&[[0.0, 0.0], [10.0, 0.0], [0.0, 10.0], [10.0, 10.0], [3.0, 1.0]]);
        match spatial_median(&data, 1e-15, 1) {
            Err(Error::Convergence { iterate, iterations, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(iterate.len(), 2);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
        assert!(spatial_median(&data, 0.0, 10).is_err());
    }

    #[test]
    fn fixed_location_checks_dimension() {
        let data = m(&[[0.0, 0.0], [1.0, 1.0]]);
        assert!(LocationMethod::Fixed(vec![0.0]).estimate(&data).is_err());
        assert_eq!(
            LocationMethod::Fixed(vec![0.5, 0.5]).estimate(&data).unwrap(),
            vec![0.5, 0.5]
        );
    }
}
