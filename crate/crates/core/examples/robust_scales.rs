//! SD, MAD and Qn on a contaminated sample, and the fast Qn against the
//! quadratic reference implementation.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sscor::scale::{qn, qn_naive, ScaleMethod};

fn main() -> sscor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut x: Vec<f64> = (0..1000).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
    println!("{:>5} {:>10} {:>10} {:>10}", "", "sd", "mad", "qn");
    for contaminated in [0, 50, 200] {
        for v in x.iter_mut().take(contaminated) {
            *v = 50.0;
        }
        let row: Vec<String> = [ScaleMethod::sd(), ScaleMethod::mad(), ScaleMethod::qn()]
            .iter()
            .map(|m| m.with_consistency_constant().estimate(&x).map(|s| format!("{s:>10.4}")))
            .collect::<sscor::Result<_>>()?;
        println!("{:>4}% {}", contaminated / 10, row.join(" "));
    }

    let y: Vec<f64> = (0..3000).map(|_| rng.random_range(0..40) as f64).collect();
    let start = Instant::now();
    let fast = qn(&y)?;
    let t_fast = start.elapsed();
    let start = Instant::now();
    let slow = qn_naive(&y)?;
    let t_slow = start.elapsed();
    println!("\nQn of 3000 tied integers: fast {fast} ({t_fast:?}), reference {slow} ({t_slow:?})");
    assert_eq!(fast, slow);
    Ok(())
}
