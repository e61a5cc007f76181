//! Norm values, duality functionals and the rounded sup-norm ball.
//!
//!     cargo run --example norm_geometry

use nonexp_fp::{NormSpec, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let norms = [
        NormSpec::Euclidean,
        NormSpec::L1,
        NormSpec::LInf,
        NormSpec::p_norm(4.0)?,
        NormSpec::rounded_linf(0.5)?,
    ];
    let x = Vector::from([1.0, 0.5]);
    println!("x = {x}");
    for n in &norms {
        let l = n.duality_functional(&x)?;
        let report = n.duality_check(&x, 2000, 42)?;
        println!(
            "{:<18} |x| = {:.9}  l_x = ({:.6}, {:.6})  smooth = {:<5}  dual-norm excess = {:.1e}",
            n.to_string(),
            n.value(&x),
            l.covector[0],
            l.covector[1],
            l.smooth,
            report.dual_norm_excess
        );
    }

    let rounded = NormSpec::rounded_linf(0.5)?;
    println!("rounded ball, flat face |(1, y)| for |y| <= 1/2:");
    for y in [-0.5, -0.25, 0.0, 0.25, 0.5] {
        println!("  y = {y:5}: {:.12}", rounded.value(&Vector::from([1.0, y])));
    }
    println!(
        "corner |(1, 1)| = {:.12} (4 - 2 sqrt 2 = {:.12})",
        rounded.value(&Vector::from([1.0, 1.0])),
        4.0 - 2.0 * 2f64.sqrt()
    );
    Ok(())
}
