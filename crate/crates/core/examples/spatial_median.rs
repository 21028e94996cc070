//! Spatial and coordinatewise medians, including data sets whose solution
//! is one of the observations.

use sscor::location::{coordinatewise_median, l1_objective, spatial_median, LocationMethod};
use sscor::SampleMatrix;

fn show(label: &str, rows: &[[f64; 2]]) -> sscor::Result<()> {
    let data = SampleMatrix::from_rows(rows)?;
    let m = spatial_median(&data, 1e-10, 1000)?;
    let c = coordinatewise_median(&data);
    println!("{label}");
    println!("  spatial median        ({:.6}, {:.6})  objective {:.6}", m[0], m[1], l1_objective(&data, &m));
    println!("  coordinatewise median ({:.6}, {:.6})  objective {:.6}", c[0], c[1], l1_objective(&data, &c));
    Ok(())
}

fn main() -> sscor::Result<()> {
    show("skewed quadrilateral", &[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0], [10.0, 10.0]])?;
    show("triangle with a 150 degree angle at the origin", &[[0.0, 0.0], [10.0, 0.0], [-8.66, 5.0]])?;
    show("heavy point", &[[2.0, 2.0], [2.0, 2.0], [2.0, 2.0], [0.0, 0.0], [5.0, 1.0]])?;

    let rows: Vec<[f64; 2]> = (0..9).map(|i| [i as f64, (i * i) as f64]).collect();
    let data = SampleMatrix::from_rows(&rows)?;
    for method in [LocationMethod::SpatialMedian, LocationMethod::CoordinatewiseMedian] {
        let t = method.estimate(&data)?;
        println!("{:<12} on a parabola: ({:.4}, {:.4})", method.name(), t[0], t[1]);
    }
    Ok(())
}
