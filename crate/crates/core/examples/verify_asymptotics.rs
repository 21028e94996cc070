//! Simulated variance of the two-stage estimator and the sign fourth
//! moments against their closed forms.

use sscor::elliptical::Family;
use sscor::simharness::{verify_asymptotics_with, VerifyOptions};

fn main() -> sscor::Result<()> {
    println!("{:<6} {:<6} {:<16} {:>10} {:>10} {:>8}", "family", "rho", "quantity", "empirical", "closed", "z");
    for family in [Family::Normal, Family::Student { nu: 3.0 }] {
        for rho in [0.0, 0.5, -0.8] {
            let opts = VerifyOptions { family, ..VerifyOptions::new(rho, 300, 3_000, 1) };
            let report = verify_asymptotics_with(&opts)?;
            for (name, c) in report.checks() {
                println!("{:<6} {rho:<6} {name:<16} {:>10.5} {:>10.5} {:>8.2}",
                    family.name(), c.empirical, c.theoretical, c.z_score());
            }
        }
    }
    Ok(())
}
