//! Anchored continuation turns `a ↦ y_a` into a 1-Lipschitz retraction
//! onto the fixed-point set; for a coordinate clamp it is the clamp itself.
//!
//!     cargo run --example coord_clamp_retraction

use nonexp_fp::maps::catalog::{self, CLAMP_BOX};
use nonexp_fp::solver::{retraction_grid, LambdaSchedule, SolveOptions};
use nonexp_fp::Vector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = catalog::coord_clamp()?;
    let schedule = LambdaSchedule::geometric(0.5, 30)?;
    let ticks = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let anchors: Vec<Vector> = ticks
        .iter()
        .flat_map(|&u| ticks.iter().map(move |&v| Vector::from([u, v])))
        .collect();
    let pairs = retraction_grid(&map, &anchors, &schedule, &SolveOptions::default())?;

    let mut worst_err = 0.0_f64;
    for (a, y) in &pairs {
        let clamp = Vector::from([a[0].clamp(CLAMP_BOX[0].0, CLAMP_BOX[0].1), a[1].clamp(CLAMP_BOX[1].0, CLAMP_BOX[1].1)]);
        worst_err = worst_err.max(y.distance(&clamp));
        println!("a = {a:<12} y_a = ({:.6}, {:.6})", y[0], y[1]);
    }
    let mut worst_ratio = 0.0_f64;
    for (i, (a, y)) in pairs.iter().enumerate() {
        for (b, z) in &pairs[i + 1..] {
            worst_ratio = worst_ratio.max(y.distance(z) / a.distance(b));
        }
    }
    println!("max |y_a - clamp(a)| = {worst_err:.2e}");
    println!("max |y_a - y_b| / |a - b| = {worst_ratio:.9}");
    Ok(())
}
