//! Robust bivariate correlation based on the spatial sign covariance matrix.
//!
//! The crate is organised bottom-up:
//!
//! * [`signs`]: spatial signs, the empirical SSCM and the closed-form
//!   bivariate constants at elliptical distributions.
//! * [`location`]: spatial median (Weiszfeld with anchor handling) and
//!   coordinatewise median.
//! * [`scale`]: SD, MAD and the Qn scale estimator (fast selection plus an
//!   O(n²) reference).
//! * [`correlation`]: the one- and two-stage spatial sign correlation,
//!   asymptotic variances, the variance-stabilising transform, confidence
//!   intervals and χ² tests.
//! * [`pearson`]: the moment-correlation benchmark with kurtosis-adjusted
//!   intervals.
//! * [`elliptical`]: seeded normal / Student-t samplers.
//! * [`simharness`]: coverage and length studies, Monte Carlo checks of the
//!   asymptotic constants, and CSV estimation reports.
//!
//! ```
//! use sscor::{SampleMatrix, correlation::{sscor_two_stage, h_inv}};
//! use sscor::{location::LocationMethod, scale::ScaleMethod};
//!
//! // A noisy line with one gross outlier.
//! let mut rows: Vec<[f64; 2]> = (0..20)
//!     .map(|i| [i as f64, 2.0 * i as f64 + if i % 2 == 0 { 0.5 } else { -0.5 }])
//!     .collect();
//! rows[19] = [19.0, -400.0];
//! let data = SampleMatrix::from_rows(&rows).unwrap();
//! let est = sscor_two_stage(&data, ScaleMethod::qn(), &LocationMethod::SpatialMedian).unwrap();
//! assert!(est.rho_hat > 0.9);
//! assert!(sscor::pearson::pearson_corr(&data).unwrap() < 0.5);
//! assert_eq!(h_inv(0.0), 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod elliptical;
mod error;
pub mod location;
pub mod pearson;
pub mod scale;
pub mod signs;
pub mod simharness;
mod summation;

pub use error::{Error, Result};
pub use signs::{SampleMatrix, SymMat};
