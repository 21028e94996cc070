use std::fmt::Write as _;
use std::path::Path;

use crate::correlation::{
    confidence_interval, sscor_two_stage, test_one_sample, CiMethod, ConfInterval, CorrEstimate,
    TestResult,
};
use crate::location::LocationMethod;
use crate::pearson::{ci_pearson, kurtosis_mv, pearson_corr};
use crate::scale::ScaleMethod;
use crate::{Error, Result, SampleMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOptions {
    pub scale: ScaleMethod,
    pub location: LocationMethod,
    pub level: f64,
    /// Null value of the optional one-sample test.
    pub rho0: Option<f64>,
    pub alpha: f64,
    /// Zero-based indices of the two columns to correlate.
    pub columns: (usize, usize),
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            scale: ScaleMethod::qn(),
            location: LocationMethod::SpatialMedian,
            level: 0.95,
            rho0: None,
            alpha: 0.05,
            columns: (0, 1),
        }
    }
}

/// Pearson benchmark; absent when the moment path is degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct PearsonSummary {
    pub rho_hat: f64,
    pub kappa_hat: Option<f64>,
    pub ci_plain: Option<ConfInterval>,
    pub ci_z: Option<ConfInterval>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimate: CorrEstimate,
    pub ci_plain: ConfInterval,
    pub ci_h: ConfInterval,
    pub test: Option<(f64, TestResult)>,
    pub pearson: std::result::Result<PearsonSummary, String>,
}

impl EstimateReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let e = &self.estimate;
        let _ = writeln!(s, "n = {}", e.n);
        let _ = writeln!(
            s,
            "sscor (two-stage, scale = {}, location = {}): {:.6}",
            e.scale_method.map_or("none", |m| m.name()),
            e.location_method.name(),
            e.rho_hat
        );
        let level = self.ci_plain.level * 100.0;
        let _ = writeln!(s, "  {level}% CI plain:  [{:.6}, {:.6}]", self.ci_plain.lo, self.ci_plain.hi);
        let _ = writeln!(s, "  {level}% CI h:      [{:.6}, {:.6}]", self.ci_h.lo, self.ci_h.hi);
        if let Some((rho0, t)) = &self.test {
            let _ = writeln!(
                s,
                "  test rho = {rho0}: T = {:.6}, p = {:.6}, critical = {:.6} at alpha = {} -> {}",
                t.statistic,
                t.p_value,
                t.critical,
                t.alpha,
                if t.reject { "reject" } else { "do not reject" }
            );
        }
        match &self.pearson {
            Ok(p) => {
                let _ = writeln!(s, "pearson: {:.6}", p.rho_hat);
                match p.kappa_hat {
                    Some(k) => {
                        let _ = writeln!(s, "  kurtosis estimate: {k:.6}");
                    }
                    None => {
                        let _ = writeln!(s, "  kurtosis estimate: unavailable");
                    }
                }
                for (label, ci) in [("plain", &p.ci_plain), ("z", &p.ci_z)] {
                    if let Some(ci) = ci {
                        let _ = writeln!(s, "  {level}% CI {label:<6} [{:.6}, {:.6}]", ci.lo, ci.hi);
                    }
                }
            }
            Err(reason) => {
                let _ = writeln!(s, "pearson: unavailable ({reason})");
            }
        }
        s
    }
}

/// Reads a numeric CSV. A first line that does not parse as numbers is taken
/// as a header; any later non-numeric field is an error naming its line.
pub fn read_csv_sample(path: &Path, columns: (usize, usize)) -> Result<SampleMatrix> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_csv_from(file, columns)
}

pub(crate) fn read_csv_from<R: std::io::Read>(reader: R, columns: (usize, usize)) -> Result<SampleMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let (cx, cy) = columns;
    let needed = cx.max(cy) + 1;
    let mut rows: Vec<[f64; 2]> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Option<Vec<f64>> = [cx, cy]
            .iter()
            .map(|&j| record.get(j).and_then(|v| v.parse::<f64>().ok()).filter(|v| v.is_finite()))
            .collect();
        match parsed {
            Some(v) => rows.push([v[0], v[1]]),
            None if first && record.len() >= needed => {}
            None => {
                return Err(Error::Parse {
                    line,
                    message: if record.len() < needed {
                        format!("expected at least {needed} columns, found {}", record.len())
                    } else {
                        "non-numeric value".to_string()
                    },
                })
            }
        }
        first = false;
    }
    if rows.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 data rows, found {}",
            rows.len()
        )));
    }
    SampleMatrix::from_rows(&rows)
}

/// Reads `opts.columns` of the CSV at `path` and runs [`estimate_sample`].
pub fn estimate_cmd(path: &Path, opts: &EstimateOptions) -> Result<EstimateReport> {
    let data = read_csv_sample(path, opts.columns)?;
    estimate_sample(&data, opts)
}

/// Two-stage spatial sign correlation with both intervals, an optional test
/// and the Pearson benchmark for a two-column sample.
pub fn estimate_sample(data: &SampleMatrix, opts: &EstimateOptions) -> Result<EstimateReport> {
    let estimate = sscor_two_stage(data, opts.scale, &opts.location)?;
    let ci_plain = confidence_interval(&estimate, opts.level, CiMethod::Plain)?;
    let ci_h = confidence_interval(&estimate, opts.level, CiMethod::HTransform)?;
    let test = match opts.rho0 {
        Some(rho0) => Some((rho0, test_one_sample(&estimate, rho0, opts.alpha)?)),
        None => None,
    };
    let pearson = pearson_corr(data).map_err(|e| e.to_string()).map(|rho_hat| {
        let kappa_hat = kurtosis_mv(data).ok().map(|k| k.kappa_hat);
        let ci = |method| {
            kappa_hat.and_then(|k| ci_pearson(rho_hat, k, data.nrows(), opts.level, method).ok())
        };
        PearsonSummary {
            rho_hat,
            kappa_hat,
            ci_plain: ci(CiMethod::Plain),
            ci_z: ci(CiMethod::ZTransform),
        }
    });
    Ok(EstimateReport {
        estimate,
        ci_plain,
        ci_h,
        test,
        pearson,
    })
}
