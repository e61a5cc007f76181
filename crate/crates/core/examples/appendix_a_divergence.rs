//! The triangle map whose λ-fixed points never settle down.
//!
//! Solves `y = λ f(y)` along `λ = 1 - e^{-s}`, compares `x_λ = y_λ / λ`
//! with its closed form and measures the oscillation of the tail.
//!
//!     cargo run --release --example appendix_a_divergence

use nonexp_fp::diagnostics::detect_divergence;
use nonexp_fp::maps::{catalog, MapKind};
use nonexp_fp::solver::{continuation, LambdaSchedule, SolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = catalog::appendix_a(0.5)?;
    let MapKind::AppendixA(profile) = map.kind() else {
        unreachable!("catalog::appendix_a builds the triangle map")
    };
    println!("alpha = {}, calibrated eps0 = {:.6}", profile.alpha(), profile.eps0());

    let schedule = LambdaSchedule::log_spaced(0.5, 8.0, 0.25)?;
    let traj = continuation(&map, &schedule, &SolveOptions::default())?;

    println!("{:>6} {:>10} {:>7} {:>14} {:>14} {:>10}", "s", "lambda", "iters", "x_1", "x_2", "err");
    let mut worst = 0.0_f64;
    for r in &traj.records {
        let s = -(1.0 - r.lambda).ln();
        let e1 = (r.x_lambda[0] - profile.x_lambda_first(r.lambda)).abs();
        let e2 = (r.x_lambda[1] - profile.x_lambda_second(r.lambda)).abs();
        worst = worst.max(e1.max(e2));
        println!(
            "{s:6.2} {:10.6} {:7} {:14.8} {:14.8} {:10.2e}",
            r.lambda,
            r.iterations,
            r.x_lambda[0],
            r.x_lambda[1],
            e1.max(e2)
        );
    }
    let div = detect_divergence(&traj, 0.6)?;
    println!("max deviation from closed form: {worst:.2e}");
    println!(
        "tail diameter over the last {} points: {:.6} ({:.2} eps0)",
        div.tail_len,
        div.tail_diameter,
        div.tail_diameter / profile.eps0()
    );
    Ok(())
}
