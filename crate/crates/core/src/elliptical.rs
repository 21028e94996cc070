//! Seeded samplers for bivariate normal and Student-t populations.
//!
//! Every draw is a pure function of `(spec, n, seed)`: the generator is a
//! ChaCha8 stream keyed by the master seed and selected by the stream id, so
//! replications can run on any number of threads in any order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::{Error, Result, SampleMatrix, SymMat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Normal,
    /// Multivariate t with `nu` degrees of freedom.
    Student { nu: f64 },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Normal => "normal".to_string(),
            Family::Student { nu } => format!("t{nu}"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(Family::Normal),
            _ => {
                let nu = s
                    .strip_prefix('t')
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|nu| *nu > 0.0 && nu.is_finite())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown distribution '{s}'")))?;
                Ok(Family::Student { nu })
            }
        }
    }
}

/// Bivariate elliptical population with shape
/// `[[a₁², ρa₁a₂], [ρa₁a₂, a₂²]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticalSpec {
    pub family: Family,
    pub rho: f64,
    pub scales: [f64; 2],
    pub location: [f64; 2],
}

impl EllipticalSpec {
    /// Centred population with unit marginal scales.
    pub fn standard(family: Family, rho: f64) -> Self {
        Self {
            family,
            rho,
            scales: [1.0, 1.0],
            location: [0.0, 0.0],
        }
    }

    pub fn with_scales(mut self, a1: f64, a2: f64) -> Self {
        self.scales = [a1, a2];
        self
    }

    pub fn with_location(mut self, m1: f64, m2: f64) -> Self {
        self.location = [m1, m2];
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.abs() < 1.0) {
            return Err(Error::Domain { what: "rho", value: self.rho });
        }
        for &a in &self.scales {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Domain { what: "scale", value: a });
            }
        }
        if self.location.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidInput("location must be finite".into()));
        }
        if let Family::Student { nu } = self.family {
            if !(nu > 0.0 && nu.is_finite()) {
                return Err(Error::Domain { what: "nu", value: nu });
            }
        }
        Ok(())
    }

    /// Lower Cholesky factor `[[l11, 0], [l21, l22]]` of the shape matrix.
    fn cholesky(&self) -> [f64; 3] {
        let [a1, a2] = self.scales;
        [a1, self.rho * a2, a2 * (1.0 - self.rho * self.rho).sqrt()]
    }
}

/// Identifies one random stream: `master_seed` keys the generator and
/// `stream_id` (normally the replication index) selects the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

pub fn shape_matrix(spec: &EllipticalSpec) -> Result<SymMat> {
    spec.validate()?;
    let [a1, a2] = spec.scales;
    Ok(SymMat::from_2x2(a1 * a1, spec.rho * a1 * a2, a2 * a2))
}

/// Draws `n` observations. For the Student family each observation is
/// `μ + L z / √(g/ν)` with one `g ~ χ²_ν` shared by both coordinates.
pub fn sample(spec: &EllipticalSpec, n: usize, seed: SeedSpec) -> Result<SampleMatrix> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidInput("sample size must be positive".into()));
    }
    let mut rng = seed.rng();
    let [l11, l21, l22] = spec.cholesky();
    let chi2 = match spec.family {
        Family::Normal => None,
        Family::Student { nu } => Some((
            nu,
            Gamma::new(nu / 2.0, 2.0).map_err(|e| Error::InvalidInput(e.to_string()))?,
        )),
    };
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let radial = match &chi2 {
            None => 1.0,
            Some((nu, gamma)) => {
                let g: f64 = gamma.sample(&mut rng);
                (nu / g).sqrt()
            }
        };
        values.push(spec.location[0] + radial * l11 * z1);
        values.push(spec.location[1] + radial * (l21 * z1 + l22 * z2));
    }
    SampleMatrix::new(n, 2, values)
}
