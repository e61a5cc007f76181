//! Banach iteration for `y = λ f(y) + (1 - λ) a` and warm-started
//! continuation along a schedule `λ_k ↑ 1`.
//!
//! The stopping rule is `‖y_{k+1} - y_k‖ ≤ tol · (1 - λ)` in the stopping
//! norm (Euclidean by default). For a λ-contraction the a-posteriori bound
//! `‖y_k - y_λ‖ ≤ λ/(1-λ) · step` then keeps every reported point within
//! about `tol` of the exact fixed point.

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{NormSpec, Vector};
use crate::maps::MapSpec;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("lambda = {0} must lie in (0, 1)")]
    InvalidLambda(f64),
    #[error("tolerance must be finite and > 0, got {0}")]
    InvalidTolerance(f64),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("{what} {point} is not in the map's domain")]
    OutsideDomain { what: &'static str, point: Vector },
    #[error("no convergence at lambda = {lambda} after {iterations} iterations (last step {last_step:e})")]
    NonConvergence {
        lambda: f64,
        iterations: usize,
        last: Vector,
        last_step: f64,
    },
    #[error("continuation stopped at lambda = {lambda}: {source}")]
    Continuation {
        lambda: f64,
        partial: Box<Trajectory>,
        source: Box<SolverError>,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum ScheduleKind {
    Geometric { rho: f64, k_max: usize },
    LogSpaced { s_min: f64, s_max: f64, step: f64 },
    Explicit,
}

/// A strictly increasing sequence of λ values in `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSchedule {
    kind: ScheduleKind,
    values: Vec<f64>,
}

impl LambdaSchedule {
    /// `λ_k = 1 - ρ^k` for `k = 1..=k_max`.
    pub fn geometric(rho: f64, k_max: usize) -> Result<Self, SolverError> {
        if !(rho > 0.0 && rho < 1.0) || k_max == 0 {
            return Err(SolverError::InvalidSchedule(format!(
                "geometric schedule needs rho in (0,1) and k_max >= 1, got rho = {rho}, k_max = {k_max}"
            )));
        }
        let values = (1..=k_max).map(|k| 1.0 - rho.powi(k as i32)).collect();
        Self::checked(ScheduleKind::Geometric { rho, k_max }, values)
    }

    /// `λ = 1 - e^{-s}` for `s = s_min, s_min + step, …, ≤ s_max`, so that
    /// `ln(1 - λ)` is sampled uniformly.
    pub fn log_spaced(s_min: f64, s_max: f64, step: f64) -> Result<Self, SolverError> {
        if !(s_min > 0.0 && step > 0.0 && s_max >= s_min && s_max.is_finite()) {
            return Err(SolverError::InvalidSchedule(format!(
                "log-spaced schedule needs 0 < s_min <= s_max and step > 0, got [{s_min}, {s_max}] step {step}"
            )));
        }
        let n = ((s_max - s_min) / step + 1e-9).floor() as usize + 1;
        let values = (0..n)
            .map(|i| 1.0 - (-(s_min + step * i as f64)).exp())
            .collect();
        Self::checked(ScheduleKind::LogSpaced { s_min, s_max, step }, values)
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self, SolverError> {
        Self::checked(ScheduleKind::Explicit, values)
    }

    fn checked(kind: ScheduleKind, values: Vec<f64>) -> Result<Self, SolverError> {
        if values.is_empty() {
            return Err(SolverError::InvalidSchedule("empty schedule".into()));
        }
        if let Some(&bad) = values.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
            return Err(SolverError::InvalidSchedule(format!("lambda {bad} outside (0, 1)")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SolverError::InvalidSchedule("lambdas must be strictly increasing".into()));
        }
        Ok(LambdaSchedule { kind, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn description(&self) -> String {
        match &self.kind {
            ScheduleKind::Geometric { rho, k_max } => format!("geometric(rho={rho}, k_max={k_max})"),
            ScheduleKind::LogSpaced { s_min, s_max, step } => {
                format!("log_spaced(s_min={s_min}, s_max={s_max}, step={step})")
            }
            ScheduleKind::Explicit => format!("explicit({} values)", self.values.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    /// Defaults to `ceil(60 / (1 - λ))`.
    pub max_iter: Option<usize>,
    pub stopping_norm: NormSpec,
    /// Keep every step length in [`SolveReport::steps`].
    pub record_steps: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOL,
            max_iter: None,
            stopping_norm: NormSpec::Euclidean,
            record_steps: false,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolveOptions {
            tol,
            ..Default::default()
        }
    }
}

pub fn default_max_iter(lambda: f64) -> usize {
    (60.0 / (1.0 - lambda)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub lambda: f64,
    pub y_lambda: Vector,
    /// `y_λ / λ`, the fixed point of `x ↦ f(λx)`.
    pub x_lambda: Vector,
    pub iterations: usize,
    /// Length of the last step.
    pub residual: f64,
    /// `λ/(1-λ) · residual`, bounding the distance to the exact fixed point.
    pub error_bound: f64,
    pub steps: Vec<f64>,
}

/// Solutions along a λ schedule. `norm` is the experiment norm used for
/// reporting `‖y_λ‖`; it does not affect the solves.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub map: String,
    pub norm: NormSpec,
    pub anchor: Vector,
    pub tol: f64,
    pub records: Vec<SolveReport>,
}

impl Trajectory {
    pub fn with_norm(mut self, norm: NormSpec) -> Self {
        self.norm = norm;
        self
    }

    pub fn norm_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| self.norm.value(&r.y_lambda)).collect()
    }

    pub fn last(&self) -> Option<&SolveReport> {
        self.records.last()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lambda).collect()
    }
}

fn check_inputs(map: &MapSpec, lambda: f64, opts: &SolveOptions) -> Result<(), SolverError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(SolverError::InvalidLambda(lambda));
    }
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(SolverError::InvalidTolerance(opts.tol));
    }
    let _ = map;
    Ok(())
}

fn require_in_domain(map: &MapSpec, what: &'static str, p: &Vector) -> Result<(), SolverError> {
    match map.domain().contains(p) {
        Ok(true) => Ok(()),
        _ => Err(SolverError::OutsideDomain {
            what,
            point: p.clone(),
        }),
    }
}

fn iterate(
    map: &MapSpec,
    lambda: f64,
    anchor: Option<&Vector>,
    x0: &Vector,
    opts: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    let max_iter = opts.max_iter.unwrap_or_else(|| default_max_iter(lambda));
    let threshold = opts.tol * (1.0 - lambda);
    let mut y = x0.clone();
    let mut steps = Vec::new();
    let mut step = f64::INFINITY;
    for k in 1..=max_iter {
        let fy = map.eval_unchecked(&y);
        let next = match anchor {
            Some(a) => Vector::new(
                fy.coords()
                    .iter()
                    .zip(a.coords())
                    .map(|(f, a)| lambda * f + (1.0 - lambda) * a)
                    .collect(),
            ),
            None => fy.scale(lambda),
        };
        step = opts.stopping_norm.value(&(&next - &y));
        y = next;
        if opts.record_steps {
            steps.push(step);
        }
        if step <= threshold {
            return Ok(SolveReport {
                lambda,
                x_lambda: y.scale(1.0 / lambda),
                y_lambda: y,
                iterations: k,
                residual: step,
                error_bound: step * lambda / (1.0 - lambda),
                steps,
            });
        }
    }
    Err(SolverError::NonConvergence {
        lambda,
        iterations: max_iter,
        last: y,
        last_step: step,
    })
}

/// Fixed point of `y ↦ λ f(y)`, iterated from `x0`.
pub fn solve_lambda(
    map: &MapSpec,
    lambda: f64,
    x0: &Vector,
    opts: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    check_inputs(map, lambda, opts)?;
    require_in_domain(map, "origin", &Vector::zeros(map.dim()))?;
    require_in_domain(map, "start point", x0)?;
    iterate(map, lambda, None, x0, opts)
}

/// Fixed point of `y ↦ λ f(y) + (1 - λ) anchor`, iterated from `x0`.
pub fn solve_anchored(
    map: &MapSpec,
    lambda: f64,
    anchor: &Vector,
    x0: &Vector,
    opts: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    check_inputs(map, lambda, opts)?;
    require_in_domain(map, "anchor", anchor)?;
    require_in_domain(map, "start point", x0)?;
    iterate(map, lambda, Some(anchor), x0, opts)
}

/// Solves every λ of the schedule in order, each warm-started from the
/// previous solution; the first solve starts at 0.
pub fn continuation(
    map: &MapSpec,
    schedule: &LambdaSchedule,
    opts: &SolveOptions,
) -> Result<Trajectory, SolverError> {
    continuation_anchored(map, schedule, &Vector::zeros(map.dim()), opts)
}

/// Anchored continuation; the first solve starts at the anchor.
pub fn continuation_anchored(
    map: &MapSpec,
    schedule: &LambdaSchedule,
    anchor: &Vector,
    opts: &SolveOptions,
) -> Result<Trajectory, SolverError> {
    require_in_domain(map, "anchor", anchor)?;
    let anchored = !anchor.is_zero();
    if !anchored {
        require_in_domain(map, "origin", &Vector::zeros(map.dim()))?;
    }
    let mut traj = Trajectory {
        map: map.name().to_string(),
        norm: NormSpec::Euclidean,
        anchor: anchor.clone(),
        tol: opts.tol,
        records: Vec::with_capacity(schedule.len()),
    };
    let mut start = anchor.clone();
    for &lambda in schedule.values() {
        check_inputs(map, lambda, opts)?;
        let result = iterate(map, lambda, anchored.then_some(anchor), &start, opts);
        match result {
            Ok(report) => {
                start = report.y_lambda.clone();
                traj.records.push(report);
            }
            Err(e) => {
                return Err(SolverError::Continuation {
                    lambda,
                    partial: Box::new(traj),
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(traj)
}

/// Terminal points `y_a` of anchored continuations, one per anchor, in
/// anchor order. Anchors are solved in parallel.
pub fn retraction_grid(
    map: &MapSpec,
    anchors: &[Vector],
    schedule: &LambdaSchedule,
    opts: &SolveOptions,
) -> Result<Vec<(Vector, Vector)>, SolverError> {
    anchors
        .par_iter()
        .map(|a| {
            let traj = continuation_anchored(map, schedule, a, opts)?;
            let last = traj.records.last().expect("schedule is nonempty");
            Ok((a.clone(), last.y_lambda.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ConvexDomain;
    use crate::maps::catalog;

    #[test]
    fn schedules() {
        let g = LambdaSchedule::geometric(0.5, 3).unwrap();
        assert_eq!(g.values(), &[0.5, 0.75, 0.875]);
        let l = LambdaSchedule::log_spaced(0.5, 8.0, 0.25).unwrap();
        assert_eq!(l.len(), 31);
        assert!((l.values()[0] - (1.0 - (-0.5f64).exp())).abs() < 1e-16);
        assert!((l.last() - (1.0 - (-8.0f64).exp())).abs() < 1e-16);
        assert!(LambdaSchedule::explicit(vec![]).is_err());
        assert!(LambdaSchedule::explicit(vec![0.5, 0.5]).is_err());
        assert!(LambdaSchedule::explicit(vec![0.5, 1.0]).is_err());
        assert!(LambdaSchedule::geometric(1.0, 3).is_err());
        assert!(LambdaSchedule::log_spaced(0.0, 1.0, 0.1).is_err());
        // 1 - 2^-60 rounds to 1
        assert!(LambdaSchedule::geometric(0.5, 60).is_err());
    }

    #[test]
    fn disk_closed_form() {
        let map = catalog::disk_projection().unwrap();
        let opts = SolveOptions::default();
        let r = solve_lambda(&map, 0.9, &Vector::zeros(2), &opts).unwrap();
        assert!(r.y_lambda.distance(&Vector::from([0.378, 0.504])) < 1e-9);
        assert!(r.x_lambda.distance(&Vector::from([0.42, 0.56])) < 1e-9);
        assert!(r.residual <= opts.tol * 0.1);
    }

    #[test]
    fn appendix_a_closed_form() {
        let map = MapSpec::appendix_a(crate::maps::EpsilonProfile::new(0.5, 0.05).unwrap()).unwrap();
        let r = solve_lambda(&map, 0.5, &Vector::zeros(2), &SolveOptions::default()).unwrap();
        let expect = Vector::from([0.05 * 0.5f64.ln().sin(), -1.0 / 3.0]);
        assert!(r.x_lambda.distance(&expect) < 1e-8, "{} vs {}", r.x_lambda, expect);
        assert!((r.x_lambda[0] + 0.031948).abs() < 1e-6);
    }

    #[test]
    fn zero_fixed_point() {
        let domain = ConvexDomain::cube(2, 1.0).unwrap();
        let map = crate::maps::MapSpec::coord_clamp(vec![(-0.5, 0.5), (-0.1, 0.3)], domain).unwrap();
        for l in [0.1, 0.5, 0.999] {
            let r = solve_lambda(&map, l, &Vector::zeros(2), &SolveOptions::default()).unwrap();
            assert!(r.y_lambda.is_zero());
        }
    }

    #[test]
    fn clamp_continuation() {
        let map = catalog::coord_clamp().unwrap();
        let sched = LambdaSchedule::geometric(0.5, 20).unwrap();
        let traj = continuation(&map, &sched, &SolveOptions::default()).unwrap();
        for r in &traj.records {
            assert!((r.y_lambda[0] - 0.2 * r.lambda).abs() < 1e-9);
            assert!(r.y_lambda[1].abs() < 1e-9);
        }
    }

    #[test]
    fn anchored_examples() {
        let map = catalog::coord_clamp().unwrap();
        let opts = SolveOptions::default();
        let zero = Vector::zeros(2);
        let a = solve_anchored(&map, 0.7, &zero, &zero, &opts).unwrap();
        let b = solve_lambda(&map, 0.7, &zero, &opts).unwrap();
        assert_eq!(a.y_lambda, b.y_lambda);

        let anchor = Vector::from([0.0, 0.1]);
        let r = solve_anchored(&map, 0.9, &anchor, &zero, &opts).unwrap();
        assert!(r.y_lambda.distance(&Vector::from([0.18, 0.1])) < 1e-9);

        let fixed = Vector::from([0.5, -0.25]);
        for l in [0.3, 0.9, 0.9999] {
            let r = solve_anchored(&map, l, &fixed, &zero, &opts).unwrap();
            assert!(r.y_lambda.distance(&fixed) < 1e-9);
        }
    }

    #[test]
    fn nonconvergence_reports_last_iterate() {
        let map = catalog::disk_projection().unwrap();
        let opts = SolveOptions {
            max_iter: Some(1),
            ..Default::default()
        };
        match solve_lambda(&map, 0.9, &Vector::zeros(2), &opts) {
            Err(SolverError::NonConvergence { iterations, last, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(last.dim(), 2);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
        let sched = LambdaSchedule::explicit(vec![0.5, 0.9]).unwrap();
        match continuation(&map, &sched, &opts) {
            Err(SolverError::Continuation { partial, .. }) => assert!(partial.records.len() <= 1),
            other => panic!("expected continuation failure, got {other:?}"),
        }
    }

    #[test]
    fn precondition_errors() {
        let map = catalog::disk_projection().unwrap();
        let zero = Vector::zeros(2);
        let opts = SolveOptions::default();
        assert_eq!(
            solve_lambda(&map, 1.0, &zero, &opts),
            Err(SolverError::InvalidLambda(1.0))
        );
        assert!(matches!(
            solve_lambda(&map, 0.5, &Vector::from([3.0, 0.0]), &opts),
            Err(SolverError::OutsideDomain { .. })
        ));
        assert_eq!(
            solve_lambda(&map, 0.5, &zero, &SolveOptions::with_tol(0.0)),
            Err(SolverError::InvalidTolerance(0.0))
        );
        // domain without the origin
        let shifted = crate::maps::MapSpec::coord_clamp(
            vec![(1.0, 1.5), (1.0, 1.5)],
            ConvexDomain::box_domain([1.0, 1.0], [2.0, 2.0]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            solve_lambda(&shifted, 0.5, &Vector::from([1.0, 1.0]), &opts),
            Err(SolverError::OutsideDomain { what: "origin", .. })
        ));
        let r = solve_anchored(&shifted, 0.5, &Vector::from([2.0, 1.0]), &Vector::from([1.0, 1.0]), &opts).unwrap();
        assert!(r.y_lambda.distance(&Vector::from([1.75, 1.0])) < 1e-9);
    }

    #[test]
    fn retraction_on_clamp() {
        let map = catalog::coord_clamp().unwrap();
        let sched = LambdaSchedule::geometric(0.5, 30).unwrap();
        let anchors: Vec<Vector> = [[-1.0, -1.0], [0.5, 0.0], [1.0, 0.9], [0.0, 0.3]]
            .into_iter()
            .map(Vector::from)
            .collect();
        let out = retraction_grid(&map, &anchors, &sched, &SolveOptions::default()).unwrap();
        for (a, y) in &out {
            let clamp = Vector::from([a[0].clamp(0.2, 0.8), a[1].clamp(-0.5, 0.5)]);
            assert!(y.distance(&clamp) < 1e-6, "{a}: {y}");
        }
        assert_eq!(out.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), anchors);
    }
}
