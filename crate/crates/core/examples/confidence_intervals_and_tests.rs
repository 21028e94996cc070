//! Plain and h-transformed intervals, and the one- and two-sample tests.

use sscor::correlation::{
    confidence_interval, sscor_two_stage, test_one_sample, test_two_sample, CiMethod,
};
use sscor::elliptical::{sample, EllipticalSpec, Family, SeedSpec};
use sscor::location::LocationMethod;
use sscor::pearson::{ci_pearson, kurtosis_mv, pearson_corr};
use sscor::scale::ScaleMethod;

fn main() -> sscor::Result<()> {
    let family = Family::Student { nu: 3.0 };
    let a = sample(&EllipticalSpec::standard(family, 0.3), 200, SeedSpec::new(11, 0))?;
    let b = sample(&EllipticalSpec::standard(family, 0.6), 300, SeedSpec::new(11, 1))?;
    let loc = LocationMethod::SpatialMedian;
    let ea = sscor_two_stage(&a, ScaleMethod::qn(), &loc)?;
    let eb = sscor_two_stage(&b, ScaleMethod::qn(), &loc)?;

    println!("sample A: n = {}, rho_hat = {:.4}", ea.n, ea.rho_hat);
    for method in [CiMethod::Plain, CiMethod::HTransform] {
        let ci = confidence_interval(&ea, 0.95, method)?;
        println!("  95% {method:?} interval [{:.4}, {:.4}], length {:.4}", ci.lo, ci.hi, ci.length());
    }
    let r = pearson_corr(&a)?;
    let k = kurtosis_mv(&a)?.kappa_hat;
    for method in [CiMethod::Plain, CiMethod::ZTransform] {
        let ci = ci_pearson(r, k, a.nrows(), 0.95, method)?;
        println!("  pearson {r:.4} (kappa {k:.2}), {method:?} [{:.4}, {:.4}]", ci.lo, ci.hi);
    }

    let t = test_one_sample(&ea, 0.0, 0.05)?;
    println!("\nH0: rho = 0       T = {:.3}, p = {:.2e}, reject = {}", t.statistic, t.p_value, t.reject);
    let t = test_two_sample(&ea, &eb, 0.05)?;
    println!("H0: rho_A = rho_B T = {:.3}, p = {:.4}, reject = {} (rho_B_hat = {:.4})",
        t.statistic, t.p_value, t.reject, eb.rho_hat);
    Ok(())
}
