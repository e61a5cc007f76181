use serde::Serialize;

use super::{first_extreme, names, CheckReport, DiagnosticsError};
use crate::geometry::NormSpec;
use crate::solver::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    /// Largest pairwise Euclidean distance among the tail `x_λ`.
    pub tail_diameter: f64,
    /// Euclidean distances between successive `x_λ` over the whole trajectory.
    pub cauchy_profile: Vec<f64>,
    pub tail_len: usize,
}

/// Tail diameter of `x_λ` over the last `ceil(tail_fraction · n)` points.
pub fn detect_divergence(traj: &Trajectory, tail_fraction: f64) -> Result<DivergenceReport, DiagnosticsError> {
    if traj.records.is_empty() {
        return Err(DiagnosticsError::EmptyTrajectory);
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(DiagnosticsError::InvalidParameter(format!(
            "tail_fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let n = traj.records.len();
    let tail_len = ((tail_fraction * n as f64).ceil() as usize).clamp(1, n);
    let tail = &traj.records[n - tail_len..];
    let mut diameter = 0.0_f64;
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            diameter = diameter.max(a.x_lambda.distance(&b.x_lambda));
        }
    }
    let cauchy_profile = traj
        .records
        .windows(2)
        .map(|w| w[0].x_lambda.distance(&w[1].x_lambda))
        .collect();
    Ok(DivergenceReport {
        tail_diameter: diameter,
        cauchy_profile,
        tail_len,
    })
}

/// Passes iff the tail diameter of `x_λ` is at most `bound`.
pub fn check_convergence(traj: &Trajectory, tail_fraction: f64, bound: f64) -> Result<CheckReport, DiagnosticsError> {
    let d = detect_divergence(traj, tail_fraction)?;
    let n = traj.records.len();
    let first = &traj.records[n - d.tail_len];
    let last = &traj.records[n - 1];
    Ok(CheckReport::new(names::CONVERGENCE, d.tail_diameter, bound, d.tail_diameter <= bound)
        .with_witness(vec![first.x_lambda.clone(), last.x_lambda.clone()])
        .with_samples(d.tail_len, None)
        .with_note(format!("tail diameter of x_lambda over the last {} of {n} lambdas", d.tail_len)))
}

/// Checks that `‖y_λ‖` (Euclidean) never decreases by more than `4 · tol`
/// and, unless every `y_λ` is within `4 · tol` of 0, has a positive net
/// increase. `worst_value` is the most negative successive change.
pub fn check_norm_monotone(traj: &Trajectory) -> Result<CheckReport, DiagnosticsError> {
    if !traj.norm.is_euclidean() {
        return Err(DiagnosticsError::NonEuclideanNorm(traj.norm.to_string()));
    }
    if traj.records.is_empty() {
        return Err(DiagnosticsError::EmptyTrajectory);
    }
    let norms: Vec<f64> = traj.records.iter().map(|r| NormSpec::Euclidean.value(&r.y_lambda)).collect();
    let slack = 4.0 * traj.tol;
    let diffs: Vec<f64> = norms.windows(2).map(|w| w[1] - w[0]).collect();
    let (worst, witness) = match first_extreme(&diffs, true) {
        Some(k) => (
            diffs[k],
            vec![traj.records[k].y_lambda.clone(), traj.records[k + 1].y_lambda.clone()],
        ),
        None => (0.0, Vec::new()),
    };
    let at_zero = norms.iter().all(|&v| v <= slack);
    let net = norms[norms.len() - 1] - norms[0];
    let pass = worst >= -slack && (at_zero || net > 0.0);
    let note = if at_zero {
        "y_lambda = 0 along the schedule".to_string()
    } else {
        format!("net increase {net:.6e}")
    };
    Ok(CheckReport::new(names::NORM_MONOTONE, worst, -slack, pass)
        .with_witness(witness)
        .with_samples(norms.len(), None)
        .with_note(note))
}

/// Worst ratio of the final step to the stopping threshold `tol · (1 - λ)`
/// over the trajectory; passes iff it is `≤ 1`.
pub fn check_residuals(traj: &Trajectory) -> CheckReport {
    let ratios: Vec<f64> = traj
        .records
        .iter()
        .map(|r| r.residual / (traj.tol * (1.0 - r.lambda)))
        .collect();
    match first_extreme(&ratios, false) {
        Some(k) => CheckReport::new(names::RESIDUALS, ratios[k], 1.0, ratios[k] <= 1.0)
            .with_witness(vec![traj.records[k].y_lambda.clone()])
            .with_samples(ratios.len(), None)
            .with_note(format!("worst at lambda = {}", traj.records[k].lambda)),
        None => CheckReport::new(names::RESIDUALS, 0.0, 1.0, true),
    }
}
