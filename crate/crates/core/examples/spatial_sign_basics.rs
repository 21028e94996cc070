//! Spatial signs, the empirical SSCM and its population value.

use sscor::elliptical::{sample, EllipticalSpec, Family, SeedSpec};
use sscor::signs::{asym_constants, spatial_sign, sscm, theoretical_sscm};

fn main() -> sscor::Result<()> {
    println!("sign of (3, 4)   = {:?}", spatial_sign(&[3.0, 4.0])?);
    println!("sign of (0, 0)   = {:?}", spatial_sign(&[0.0, 0.0])?);

    let rho = 0.6;
    let data = sample(&EllipticalSpec::standard(Family::Normal, rho), 100_000, SeedSpec::new(1, 0))?;
    let empirical = sscm(&data, &[0.0, 0.0])?;
    let population = theoretical_sscm(rho)?;
    println!("\nrho = {rho}, n = {}", data.nrows());
    println!("empirical SSCM   [{:.5} {:.5}; {:.5} {:.5}]",
        empirical.get(0, 0), empirical.get(0, 1), empirical.get(1, 0), empirical.get(1, 1));
    println!("population SSCM  [{:.5} {:.5}; {:.5} {:.5}]",
        population.get(0, 0), population.get(0, 1), population.get(1, 0), population.get(1, 1));
    println!("max |difference| {:.2e}", empirical.max_abs_diff(&population));

    let c = asym_constants(rho)?;
    println!("\nfourth-moment constants: alpha = {:.6}, beta = {:.6}, gamma = {:.6}", c.alpha, c.beta, c.gamma);
    println!("asymptotic variance of sqrt(n)(s12 - delta): w = {:.6}", c.w);
    Ok(())
}
