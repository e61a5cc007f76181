use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{first_extreme, names, require_smooth, CheckReport, DiagnosticsError};
use crate::geometry::{NormSpec, Vector};
use crate::maps::MapSpec;
use crate::rng::seeded;

pub const DEFAULT_FIX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixMethod {
    Analytic,
    AveragedIteration,
}

/// Sampled fixed points with their residuals `‖f(x) - x‖`, all within
/// `fix_tol` and pairwise farther apart than `10 · fix_tol`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixSample {
    pub points: Vec<Vector>,
    pub residuals: Vec<f64>,
    pub method: FixMethod,
    pub fix_tol: f64,
}

impl FixSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dedup_radius(&self) -> f64 {
        10.0 * self.fix_tol
    }

    /// Adds `p` unless its residual exceeds `fix_tol` or it duplicates a
    /// sampled point. Returns whether it was added.
    pub fn insert(&mut self, map: &MapSpec, p: Vector) -> bool {
        let res = residual(map, &p);
        if res > self.fix_tol {
            return false;
        }
        let radius = self.dedup_radius();
        if self.points.iter().any(|q| q.distance(&p) <= radius) {
            return false;
        }
        self.points.push(p);
        self.residuals.push(res);
        true
    }

    /// Runs averaged iteration from `start` and inserts the result.
    pub fn insert_refined(&mut self, map: &MapSpec, start: &Vector, max_iter: usize) -> Option<Vector> {
        let (p, _) = averaged_fixed_point(map, start, self.fix_tol, max_iter)?;
        self.insert(map, p.clone());
        Some(p)
    }

    /// The sampled point closest to `anchor` in the Euclidean norm.
    pub fn nearest(&self, anchor: &Vector) -> Option<&Vector> {
        let d: Vec<f64> = self.points.iter().map(|p| p.distance(anchor)).collect();
        first_extreme(&d, true).map(|i| &self.points[i])
    }
}

fn residual(map: &MapSpec, x: &Vector) -> f64 {
    map.eval_unchecked(x).distance(x)
}

/// Iterates `x ← (x + f(x)) / 2` from `start` until `‖f(x) - x‖ ≤ fix_tol`.
pub fn averaged_fixed_point(map: &MapSpec, start: &Vector, fix_tol: f64, max_iter: usize) -> Option<(Vector, f64)> {
    let mut x = start.clone();
    for _ in 0..=max_iter {
        let fx = map.eval_unchecked(&x);
        let res = fx.distance(&x);
        if res <= fix_tol {
            return Some((x, res));
        }
        x = x.lerp(&fx, 0.5);
    }
    None
}

fn dedup(map: &MapSpec, candidates: Vec<Vector>, method: FixMethod, fix_tol: f64) -> FixSample {
    let mut sample = FixSample {
        points: Vec::with_capacity(candidates.len()),
        residuals: Vec::with_capacity(candidates.len()),
        method,
        fix_tol,
    };
    for p in candidates {
        sample.insert(map, p);
    }
    sample
}

/// Averaged iteration from `n_starts` seeded domain points, deduplicated.
pub fn sample_fixed_points_averaged(
    map: &MapSpec,
    n_starts: usize,
    seed: u64,
    fix_tol: f64,
    max_iter: usize,
) -> Result<FixSample, DiagnosticsError> {
    if n_starts == 0 {
        return Err(DiagnosticsError::InvalidParameter("n_starts must be >= 1".into()));
    }
    if fix_tol.is_nan() || fix_tol <= 0.0 {
        return Err(DiagnosticsError::InvalidParameter(format!("fix_tol must be > 0, got {fix_tol}")));
    }
    let mut rng = seeded(seed);
    let starts: Vec<Vector> = (0..n_starts).map(|_| map.domain().sample(&mut rng)).collect();
    let found: Vec<Vector> = starts
        .par_iter()
        .filter_map(|s| averaged_fixed_point(map, s, fix_tol, max_iter).map(|p| p.0))
        .collect();
    let sample = dedup(map, found, FixMethod::AveragedIteration, fix_tol);
    if sample.is_empty() {
        return Err(DiagnosticsError::NoConvergedStart { n_starts, max_iter });
    }
    Ok(sample)
}

/// Fixed points from the map's analytic sampler when it has one, otherwise
/// from averaged iteration.
pub fn sample_fixed_points(
    map: &MapSpec,
    n_starts: usize,
    seed: u64,
    fix_tol: f64,
    max_iter: usize,
) -> Result<FixSample, DiagnosticsError> {
    if n_starts == 0 {
        return Err(DiagnosticsError::InvalidParameter("n_starts must be >= 1".into()));
    }
    let mut rng = seeded(seed);
    match map.analytic_fixed_points(n_starts, &mut rng) {
        Some(points) => {
            let sample = dedup(map, points, FixMethod::Analytic, fix_tol);
            if sample.is_empty() {
                return Err(DiagnosticsError::EmptyFixSample);
            }
            Ok(sample)
        }
        None => sample_fixed_points_averaged(map, n_starts, seed, fix_tol, max_iter),
    }
}

fn vi_values(candidate: &Vector, others: &[Vector], norm: &NormSpec, anchor: &Vector, exclude: f64) -> Vec<(usize, f64)> {
    let lever = candidate - anchor;
    others
        .iter()
        .enumerate()
        .filter(|(_, y)| candidate.distance(y) > exclude)
        .map(|(i, y)| {
            let l = norm
                .duality_functional(&(candidate - y))
                .expect("excluded points are distinct from the candidate");
            (i, l.covector.eval(&lever))
        })
        .collect()
}

/// Maximum over sampled fixed points `y` (farther than `10 · fix_tol`
/// from `candidate`) of `ℓ_{candidate - y}(candidate - anchor)`; passes
/// iff it is `≤ tol`.
pub fn check_variational_limit(
    candidate: &Vector,
    fix: &FixSample,
    norm: &NormSpec,
    anchor: &Vector,
    tol: f64,
) -> Result<CheckReport, DiagnosticsError> {
    require_smooth(names::VARIATIONAL_LIMIT, norm)?;
    if fix.is_empty() {
        return Err(DiagnosticsError::EmptyFixSample);
    }
    let vals = vi_values(candidate, &fix.points, norm, anchor, fix.dedup_radius());
    let only: Vec<f64> = vals.iter().map(|v| v.1).collect();
    let report = match first_extreme(&only, false) {
        Some(k) => {
            let worst = only[k];
            CheckReport::new(names::VARIATIONAL_LIMIT, worst, tol, worst <= tol)
                .with_witness(vec![candidate.clone(), fix.points[vals[k].0].clone()])
        }
        None => CheckReport::new(names::VARIATIONAL_LIMIT, 0.0, tol, true)
            .with_note("no sampled fixed point apart from the candidate"),
    };
    Ok(report.with_samples(vals.len(), None))
}

/// Counts sampled fixed points satisfying the variational inequality
/// against every other sampled point. Passes iff at most one does.
pub fn uniqueness_probe(
    fix: &FixSample,
    norm: &NormSpec,
    anchor: &Vector,
    tol: f64,
) -> Result<CheckReport, DiagnosticsError> {
    require_smooth(names::UNIQUENESS, norm)?;
    if fix.is_empty() {
        return Err(DiagnosticsError::EmptyFixSample);
    }
    let exclude = fix.dedup_radius();
    let qualifying: Vec<usize> = (0..fix.len())
        .into_par_iter()
        .filter(|&i| {
            vi_values(&fix.points[i], &fix.points, norm, anchor, exclude)
                .iter()
                .all(|v| v.1 <= tol)
        })
        .collect();
    let count = qualifying.len();
    let witness = qualifying.iter().map(|&i| fix.points[i].clone()).collect();
    Ok(CheckReport::new(names::UNIQUENESS, count as f64, 1.0, count <= 1)
        .with_witness(witness)
        .with_samples(fix.len(), None)
        .with_note(format!("{count} qualifying fixed point(s)")))
}

/// Largest residual `‖f(m) - m‖` at midpoints `m` of sampled fixed-point
/// pairs. All pairs are used when there are at most `n_midpoints` of them,
/// otherwise `n_midpoints` seeded random pairs. Passes iff the largest
/// residual is `≤ fix_tol`.
pub fn convexity_probe(fix: &FixSample, map: &MapSpec, n_midpoints: usize, seed: u64, fix_tol: f64) -> CheckReport {
    let n = fix.len();
    let total = n * n.saturating_sub(1) / 2;
    let pairs: Vec<(usize, usize)> = if total <= n_midpoints {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    } else {
        let mut rng = seeded(seed);
        let mut out = Vec::with_capacity(n_midpoints);
        while out.len() < n_midpoints {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i != j {
                out.push((i.min(j), i.max(j)));
            }
        }
        out
    };
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| residual(map, &fix.points[i].lerp(&fix.points[j], 0.5)))
        .collect();
    let report = match first_extreme(&values, false) {
        Some(k) => {
            let (i, j) = pairs[k];
            let worst = values[k];
            let a = &fix.points[i];
            let b = &fix.points[j];
            CheckReport::new(names::FIX_CONVEXITY, worst, fix_tol, worst <= fix_tol)
                .with_witness(vec![a.clone(), b.clone(), a.lerp(b, 0.5)])
        }
        None => CheckReport::new(names::FIX_CONVEXITY, 0.0, fix_tol, true).with_note("fewer than two fixed points"),
    };
    let violations = values.iter().filter(|&&v| v > fix_tol).count();
    let note = if report.note.is_empty() {
        format!("{violations} violating midpoint(s)")
    } else {
        report.note.clone()
    };
    report.with_samples(values.len(), (total > n_midpoints).then_some(seed)).with_note(note)
}
