use rayon::prelude::*;

use super::{first_extreme, names, require_smooth, CheckReport, DiagnosticsError};
use crate::geometry::{NormSpec, Vector};
use crate::maps::MapSpec;
use crate::rng::seeded;

fn draw_pairs(map: &MapSpec, n_pairs: usize, seed: u64) -> Vec<(Vector, Vector)> {
    let mut rng = seeded(seed);
    let domain = map.domain();
    (0..n_pairs)
        .map(|_| (domain.sample(&mut rng), domain.sample(&mut rng)))
        .collect()
}

fn displacement(map: &MapSpec, x: &Vector, y: &Vector) -> Vector {
    let dx = x - &map.eval_unchecked(x);
    let dy = y - &map.eval_unchecked(y);
    &dx - &dy
}

fn report(name: &str, pairs: Vec<(Vector, Vector)>, values: Vec<f64>, tol: f64, seed: u64) -> CheckReport {
    let n = values.len();
    match first_extreme(&values, true) {
        Some(i) => {
            let worst = values[i];
            let (x, y) = pairs[i].clone();
            CheckReport::new(name, worst, -tol, worst >= -tol)
                .with_witness(vec![x, y])
                .with_samples(n, Some(seed))
        }
        None => CheckReport::new(name, 0.0, -tol, true).with_samples(0, Some(seed)),
    }
}

/// Minimum over seeded domain pairs of `⟨(x - f x) - (y - f y), x - y⟩`.
/// Passes iff the minimum is `≥ -tol`.
pub fn check_monotone(map: &MapSpec, n_pairs: usize, seed: u64, tol: f64) -> CheckReport {
    let pairs = draw_pairs(map, n_pairs, seed);
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| displacement(map, x, y).dot(&(x - y)))
        .collect();
    report(names::MONOTONE, pairs, values, tol, seed)
}

/// Minimum of `ℓ_{x-y}((x - f x) - (y - f y))` over seeded pairs with
/// `x ≠ y`, for a smooth norm.
pub fn check_duality_monotone(
    map: &MapSpec,
    norm: &NormSpec,
    n_pairs: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport, DiagnosticsError> {
    require_smooth(names::DUALITY_MONOTONE, norm)?;
    let pairs: Vec<_> = draw_pairs(map, n_pairs, seed)
        .into_iter()
        .filter(|(x, y)| x != y)
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| {
            let l = norm
                .duality_functional(&(x - y))
                .expect("distinct points give a nonzero difference");
            l.covector.eval(&displacement(map, x, y))
        })
        .collect();
    Ok(report(names::DUALITY_MONOTONE, pairs, values, tol, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ConvexDomain;
    use crate::maps::{catalog, Affine, MapSpec};

    #[test]
    fn identity_bracket_vanishes() {
        let map = MapSpec::identity(ConvexDomain::cube(2, 1.0).unwrap()).unwrap();
        let r = check_monotone(&map, 100, 1, 1e-9);
        assert!(r.pass);
        assert_eq!(r.worst_value, 0.0);
    }

    #[test]
    fn negation_bracket() {
        let neg = Affine::new(vec![vec![-1.0, 0.0], vec![0.0, -1.0]], [0.0, 0.0], NormSpec::Euclidean).unwrap();
        let map = MapSpec::affine(neg, ConvexDomain::cube(2, 1.0).unwrap()).unwrap();
        let r = check_monotone(&map, 200, 2, 1e-9);
        let (x, y) = (&r.worst_witness[0], &r.worst_witness[1]);
        let d = x - y;
        assert!((r.worst_value - 2.0 * d.dot(&d)).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn constant_map_duality_bracket_is_distance() {
        let map = MapSpec::constant(Vector::from([0.1, 0.2]), ConvexDomain::cube(2, 1.0).unwrap()).unwrap();
        let norm = NormSpec::p_norm(4.0).unwrap();
        let r = check_duality_monotone(&map, &norm, 100, 3, 1e-9).unwrap();
        let d = &r.worst_witness[0] - &r.worst_witness[1];
        assert!((r.worst_value - norm.value(&d)).abs() < 1e-12);
    }

    #[test]
    fn euclidean_duality_has_same_sign() {
        let map = catalog::disk_projection().unwrap();
        let a = check_monotone(&map, 500, 4, 1e-9);
        let b = check_duality_monotone(&map, &NormSpec::Euclidean, 500, 4, 1e-9).unwrap();
        assert!(a.pass && b.pass);
        assert!(a.worst_value >= -1e-12 && b.worst_value >= -1e-12);
    }

    #[test]
    fn non_smooth_norm_rejected() {
        let map = catalog::coord_clamp().unwrap();
        assert!(matches!(
            check_duality_monotone(&map, &NormSpec::L1, 10, 0, 1e-9),
            Err(DiagnosticsError::NonSmoothNorm { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let map = catalog::coord_clamp().unwrap();
        let norm = NormSpec::p_norm(4.0).unwrap();
        let a = check_duality_monotone(&map, &norm, 300, 9, 1e-9).unwrap();
        let b = check_duality_monotone(&map, &norm, 300, 9, 1e-9).unwrap();
        assert_eq!(a, b);
    }
}
