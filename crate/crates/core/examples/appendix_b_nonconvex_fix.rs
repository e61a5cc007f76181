//! A map that is nonexpansive for the sup norm but has a non-convex set of
//! fixed points: the graph of `g(x) = 0.3 + 0.4|x|`.
//!
//!     cargo run --example appendix_b_nonconvex_fix

use nonexp_fp::diagnostics::{convexity_probe, sample_fixed_points, DEFAULT_FIX_TOL};
use nonexp_fp::maps::catalog;
use nonexp_fp::solver::{solve_lambda, SolveOptions};
use nonexp_fp::{NormSpec, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = catalog::appendix_b()?;
    for lambda in [0.5, 0.9, 0.99] {
        let r = solve_lambda(&map, lambda, &Vector::zeros(2), &SolveOptions::default())?;
        println!("lambda = {lambda}: y = {} (expected (0, {}))", r.y_lambda, 0.3 * lambda);
    }

    let fix = sample_fixed_points(&map, 101, 0, DEFAULT_FIX_TOL, 0)?;
    let probe = convexity_probe(&fix, &map, 10_000, 0, DEFAULT_FIX_TOL);
    println!(
        "convexity probe: worst midpoint residual {:.6} at {} between {} and {}",
        probe.worst_value, probe.worst_witness[2], probe.worst_witness[0], probe.worst_witness[1]
    );

    for norm in [NormSpec::LInf, NormSpec::rounded_linf(0.5)?, NormSpec::Euclidean] {
        println!("Lipschitz estimate under {norm}: {:.6}", map.lipschitz_estimate(&norm, 20_000, 1));
    }
    Ok(())
}
