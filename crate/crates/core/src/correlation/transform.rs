use std::f64::consts::{PI, SQRT_2};

use crate::{Error, Result};

/// `sup |h| = π/√2`.
pub const H_BOUND: f64 = PI / SQRT_2;

/// Asymptotic variance of the one-stage spatial sign correlation at marginal
/// scale ratio `a = √(v₁₁/v₂₂)`: `(1−ρ²)² + ½(a + 1/a)(1−ρ²)^{3/2}`.
pub fn asv_one_stage(rho: f64, a: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::Domain { what: "rho", value: rho });
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain { what: "a", value: a });
    }
    let u = 1.0 - rho * rho;
    Ok(u * u + 0.5 * (a + 1.0 / a) * u.powf(1.5))
}

/// Asymptotic variance of the two-stage spatial sign correlation,
/// `(1−ρ²)² + (1−ρ²)^{3/2}`. Arguments are clamped to `[−1, 1]`.
pub fn asv_two_stage(rho: f64) -> f64 {
    let u = (1.0 - rho * rho).max(0.0);
    u * u + u.powf(1.5)
}

/// Variance-stabilising transform: odd, increasing, `h'(x) = asv_two_stage(x)^{−1/2}`,
/// with range `[−π/√2, π/√2]`.
///
/// Evaluated as `sign(x)·√2·asin(√(z/(2−z)))` with `z = 1 − √(1−x²)`,
/// which equals the `arcsin((3z − 2)/(2 − z))/√2 + π/2^{3/2}` form but keeps
/// full relative precision near zero.
pub fn h(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::Domain { what: "x", value: x });
    }
    let x2 = x * x;
    let z = x2 / (1.0 + (1.0 - x2).sqrt());
    let inner = (z / (2.0 - z)).sqrt().min(1.0);
    Ok((SQRT_2 * inner.asin()).copysign(x))
}

/// Inverse of [`h`]; the argument is clamped to `[−π/√2, π/√2]`.
pub fn h_inv(y: f64) -> f64 {
    h_inv_clamped(y).0
}

/// Inverse of [`h`] that also reports whether `y` had to be clamped.
///
/// Uses `√(1 − cos √2y) = √2·|sin(y/√2)|`, so
/// `h⁻¹(y) = 4 sin(y/√2) / (3 − cos(√2 y))`.
pub fn h_inv_clamped(y: f64) -> (f64, bool) {
    if y.is_nan() {
        return (f64::NAN, true);
    }
    let clamped = y.abs() > H_BOUND;
    let y = y.clamp(-H_BOUND, H_BOUND);
    let x = 4.0 * (y / SQRT_2).sin() / (3.0 - (SQRT_2 * y).cos());
    (x.clamp(-1.0, 1.0), clamped)
}
