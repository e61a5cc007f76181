//! Projection onto a disk: `y_λ → ` the point of the disk nearest to 0.
//!
//!     cargo run --example disk_projection_limit

use nonexp_fp::diagnostics::{check_norm_monotone, check_variational_limit, sample_fixed_points, DEFAULT_FIX_TOL};
use nonexp_fp::maps::catalog;
use nonexp_fp::solver::{continuation, LambdaSchedule, SolveOptions};
use nonexp_fp::{NormSpec, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = catalog::disk_projection()?;
    let schedule = LambdaSchedule::geometric(0.5, 20)?;
    let traj = continuation(&map, &schedule, &SolveOptions::default())?;
    let last = traj.last().expect("nonempty schedule");
    let target = Vector::from([0.42, 0.56]);
    println!("lambda = 1 - 2^-20: y = {}, distance to {target} = {:.2e}", last.y_lambda, last.y_lambda.distance(&target));

    for r in traj.records.iter().step_by(4) {
        println!("  lambda = {:.8}  |y| = {:.10}  0.7 lambda = {:.10}", r.lambda, r.y_lambda.euclidean(), 0.7 * r.lambda);
    }
    let growth = check_norm_monotone(&traj)?;
    println!("norm growth: pass = {}, smallest increment = {:.3e}", growth.pass, growth.worst_value);

    let mut fix = sample_fixed_points(&map, 1000, 7, DEFAULT_FIX_TOL, 1000)?;
    let nearest = fix.nearest(&Vector::zeros(2)).cloned().expect("nonempty sample");
    println!("closest sampled fixed point to 0: {nearest} at {:.6}", nearest.euclidean());
    fix.insert_refined(&map, &last.y_lambda, 1000);
    let vi = check_variational_limit(&last.y_lambda, &fix, &NormSpec::Euclidean, &Vector::zeros(2), 1e-6)?;
    println!("variational inequality: pass = {}, max = {:.4}", vi.pass, vi.worst_value);
    Ok(())
}
