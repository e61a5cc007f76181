mod oracle;

use nonexp_fp::cli::output::fmt_f64;
use nonexp_fp::domain::ConvexDomain;
use nonexp_fp::maps::{self, catalog};
use nonexp_fp::solver::{solve_anchored, solve_lambda, SolveOptions};
use nonexp_fp::{NormSpec, Vector};
use proptest::prelude::*;

fn all_norms() -> Vec<NormSpec> {
    vec![
        NormSpec::Euclidean,
        NormSpec::L1,
        NormSpec::LInf,
        NormSpec::p_norm(1.5).unwrap(),
        NormSpec::p_norm(4.0).unwrap(),
        NormSpec::rounded_linf(0.5).unwrap(),
        NormSpec::rounded_linf(0.1).unwrap(),
    ]
}

fn smooth_norms() -> Vec<NormSpec> {
    all_norms().into_iter().filter(NormSpec::smooth).collect()
}

fn coords(dim: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, dim)
}

fn pair(dim: std::ops::Range<usize>) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    dim.prop_flat_map(|d| (prop::collection::vec(-5.0..5.0f64, d), prop::collection::vec(-5.0..5.0f64, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn homogeneity(x in coords(1..6), t in -4.0..4.0f64) {
        let v = Vector::new(x);
        for n in all_norms() {
            let lhs = n.value(&v.scale(t));
            let rhs = t.abs() * n.value(&v);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs), "{n}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn triangle_inequality((x, y) in pair(1..6)) {
        let (a, b) = (Vector::new(x), Vector::new(y));
        for n in all_norms() {
            let excess = n.value(&(&a + &b)) - n.value(&a) - n.value(&b);
            prop_assert!(excess <= 1e-12 * (1.0 + n.value(&a) + n.value(&b)), "{n}: {excess}");
        }
    }

    #[test]
    fn rounded_sandwich_and_gauge(x in coords(1..5), r in 0.01..0.5f64) {
        let v = Vector::new(x.clone());
        let n = NormSpec::rounded_linf(r).unwrap();
        let val = n.value(&v);
        prop_assert!(v.max_abs() <= val * (1.0 + 1e-15));
        prop_assert!(val <= v.euclidean() * (1.0 + 1e-15));
        let oracle = oracle::rounded_gauge_bisect(&x, r);
        prop_assert!((val - oracle).abs() <= 1e-10 * (1.0 + oracle), "{val} vs {oracle}");
    }

    #[test]
    fn duality_functional_norms_one(x in coords(1..6)) {
        let v = Vector::new(x);
        prop_assume!(!v.is_zero());
        for n in all_norms() {
            let l = n.duality_functional(&v).unwrap();
            let nv = n.value(&v);
            prop_assert!((l.covector.eval(&v) - nv).abs() <= 1e-12 * (1.0 + nv), "{n}");
            prop_assert!((n.dual_value(&l.covector) - 1.0).abs() <= 1e-12, "{n}");
        }
    }

    #[test]
    fn duality_matches_finite_differences(x in coords(2..5)) {
        prop_assume!(x.iter().any(|v| v.abs() > 1e-3));
        for n in smooth_norms() {
            let l = n.duality_functional(&Vector::new(x.clone())).unwrap();
            let fd = oracle::fd_gradient(|p| n.value(&Vector::new(p.to_vec())), &x, 1e-6);
            for (a, b) in l.covector.coeffs().iter().zip(&fd) {
                prop_assert!((a - b).abs() <= 1e-6, "{n} at {x:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn g_round_trip(alpha in 0.05..0.95f64, t in 0.0..=1.0f64) {
        let mu = maps::g_forward(alpha, t).unwrap();
        prop_assert!((-0.5..=0.0).contains(&mu));
        let back = maps::g_inverse(alpha, mu).unwrap();
        prop_assert!((back - t).abs() <= 1e-10);
        prop_assert!((oracle::g_inverse_bisect(alpha, mu) - t).abs() <= 1e-10);
    }

    #[test]
    fn disk_lambda_fixed_point(lambda in 0.01..0.999f64) {
        let map = catalog::disk_projection().unwrap();
        let r = solve_lambda(&map, lambda, &Vector::zeros(2), &SolveOptions::default()).unwrap();
        let p = oracle::project_disk([0.0, 0.0], catalog::DISK_CENTER, catalog::DISK_RADIUS);
        prop_assert!(oracle::dist(r.y_lambda.coords(), &[lambda * p[0], lambda * p[1]]) <= 1e-9);
        prop_assert!(r.error_bound <= 1e-9);
    }

    #[test]
    fn anchored_clamp_closed_form(a0 in -1.0..1.0f64, a1 in -1.0..1.0f64, lambda in 0.05..0.999f64) {
        let map = catalog::coord_clamp().unwrap();
        let anchor = Vector::from([a0, a1]);
        let r = solve_anchored(&map, lambda, &anchor, &Vector::zeros(2), &SolveOptions::default()).unwrap();
        // per coordinate, y = λ clamp(y) + (1-λ) a has the solution
        // clamp(a) + (1-λ)(a - clamp(a))
        for (i, (lo, hi)) in catalog::CLAMP_BOX.iter().enumerate() {
            let a = anchor[i];
            let c = a.clamp(*lo, *hi);
            prop_assert!((r.y_lambda[i] - (c + (1.0 - lambda) * (a - c))).abs() <= 1e-9);
        }
    }

    #[test]
    fn clamp_is_nonexpansive_in_every_norm((x, y) in pair(2..3)) {
        let map = catalog::coord_clamp().unwrap();
        let dom = map.domain().clone();
        let (a, b) = (dom.project(&Vector::new(x)), dom.project(&Vector::new(y)));
        let (fa, fb) = (map.eval(&a).unwrap(), map.eval(&b).unwrap());
        for n in all_norms() {
            prop_assert!(n.value(&(&fa - &fb)) <= n.value(&(&a - &b)) * (1.0 + 1e-15));
        }
    }

    #[test]
    fn projection_lands_in_domain_and_is_idempotent(x in coords(2..3)) {
        let v = Vector::new(x);
        for d in [
            ConvexDomain::triangle_t(),
            ConvexDomain::ball([0.6, 0.8], 0.3).unwrap(),
            ConvexDomain::box_domain([-1.0, -0.7], [1.0, 0.7]).unwrap(),
        ] {
            let p = d.project(&v);
            prop_assert!(d.contains(&p).unwrap());
            prop_assert!(d.project(&p).distance(&p) <= 1e-12);
        }
    }

    #[test]
    fn csv_number_round_trip(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }
}
