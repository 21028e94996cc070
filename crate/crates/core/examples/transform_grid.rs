//! The variance-stabilising transform h next to Fisher's z.

use sscor::correlation::{asv_two_stage, h, h_inv, H_BOUND};
use sscor::pearson::fisher_z;

fn main() -> sscor::Result<()> {
    println!("h maps [-1, 1] onto [-{H_BOUND:.6}, {H_BOUND:.6}]\n");
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "x", "h(x)", "h_inv(h(x))", "asv(x)", "z(x)");
    for i in -10..=10 {
        let x = i as f64 / 10.0;
        let hx = h(x)?;
        let z = if x.abs() < 1.0 { format!("{:>12.6}", fisher_z(x)?) } else { format!("{:>12}", "inf") };
        println!("{x:>6.2} {hx:>12.6} {:>12.6} {:>12.6} {z}", h_inv(hx), asv_two_stage(x));
    }
    Ok(())
}
