use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::{Covector, GeometryError, Vector};
use crate::rng::seeded;

/// Exponent of an ℓᵖ norm, guaranteed `p > 1` and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self, GeometryError> {
        if p.is_finite() && p > 1.0 {
            Ok(Exponent(p))
        } else {
            Err(GeometryError::InvalidExponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Corner radius of the rounded ℓ∞ ball, guaranteed in `(0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CornerRadius(f64);

impl CornerRadius {
    pub fn new(r: f64) -> Result<Self, GeometryError> {
        if r > 0.0 && r <= 0.5 {
            Ok(CornerRadius(r))
        } else {
            Err(GeometryError::InvalidCornerRadius(r))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Norm geometry on ℝⁿ.
///
/// `RoundedLInf(r)` is the Minkowski gauge of the cube `[-1, 1]ⁿ` with its
/// corners rounded off by radius `r`, i.e. of the Minkowski sum
/// `(1 - r)·[-1, 1]ⁿ + r·B₂`. In the plane this is the square whose four
/// corners are circular arcs of radius `r` centred at `(±(1-r), ±(1-r))`;
/// the flat faces cover `|y| ≤ 1 - r`, so `‖(1, y)‖ = 1` whenever
/// `|y| ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum NormSpec {
    Euclidean,
    L1,
    LInf,
    PNorm(Exponent),
    RoundedLInf(CornerRadius),
}

/// Output of [`NormSpec::duality_functional`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualityFunctional {
    pub covector: Covector,
    /// `false` when the norm is not differentiable and `covector` is only a
    /// deterministic subgradient selection.
    pub smooth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityReport {
    /// `|ℓ_x(x) - ‖x‖|`
    pub pairing_err: f64,
    /// `max ℓ_x(u) - ‖u‖` over sampled `u`; nonpositive when `‖ℓ_x‖_* ≤ 1`.
    pub dual_norm_excess: f64,
}

impl NormSpec {
    pub fn p_norm(p: f64) -> Result<Self, GeometryError> {
        Ok(NormSpec::PNorm(Exponent::new(p)?))
    }

    pub fn rounded_linf(r: f64) -> Result<Self, GeometryError> {
        Ok(NormSpec::RoundedLInf(CornerRadius::new(r)?))
    }

    /// Whether the norm is differentiable away from the origin.
    pub fn smooth(&self) -> bool {
        !matches!(self, NormSpec::L1 | NormSpec::LInf)
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, NormSpec::Euclidean)
    }

    pub fn id(&self) -> String {
        self.to_string()
    }

    pub fn value(&self, v: &Vector) -> f64 {
        let c = v.coords();
        match *self {
            NormSpec::Euclidean => v.euclidean(),
            NormSpec::L1 => c.iter().map(|x| x.abs()).sum(),
            NormSpec::LInf => v.max_abs(),
            NormSpec::PNorm(p) => p_norm_value(c, p.get()),
            NormSpec::RoundedLInf(r) => rounded_gauge(c, r.get()),
        }
    }

    /// Norm of a linear functional under the dual of `self`.
    pub fn dual_value(&self, l: &Covector) -> f64 {
        let c = l.coeffs();
        let l1: f64 = c.iter().map(|x| x.abs()).sum();
        match *self {
            NormSpec::Euclidean => Vector::new(c.to_vec()).euclidean(),
            NormSpec::L1 => c.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
            NormSpec::LInf => l1,
            NormSpec::PNorm(p) => {
                let q = p.get() / (p.get() - 1.0);
                p_norm_value(c, q)
            }
            // support function of (1-r)·cube + r·ball
            NormSpec::RoundedLInf(r) => {
                let r = r.get();
                (1.0 - r) * l1 + r * Vector::new(c.to_vec()).euclidean()
            }
        }
    }

    /// The norm-one functional `ℓ_x` with `ℓ_x(x) = ‖x‖`.
    ///
    /// For smooth norms this is the gradient of the norm at `x`. For ℓ¹ the
    /// selection is the sign vector (zero coordinates map to 0); for ℓ∞ it is
    /// the signed indicator of the largest coordinate, lowest index winning
    /// ties.
    pub fn duality_functional(&self, x: &Vector) -> Result<DualityFunctional, GeometryError> {
        if !x.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if x.is_zero() {
            return Err(GeometryError::Origin);
        }
        let c = x.coords();
        let coeffs = match *self {
            NormSpec::Euclidean => {
                let n = x.euclidean();
                c.iter().map(|v| v / n).collect()
            }
            NormSpec::L1 => c.iter().map(|&v| sign(v)).collect(),
            NormSpec::LInf => {
                let m = x.max_abs();
                let i = c.iter().position(|v| v.abs() == m).unwrap_or(0);
                let mut out = vec![0.0; c.len()];
                out[i] = sign(c[i]);
                out
            }
            NormSpec::PNorm(p) => p_norm_gradient(c, p.get()),
            NormSpec::RoundedLInf(r) => rounded_gradient(c, r.get()),
        };
        Ok(DualityFunctional {
            covector: Covector::new(coeffs),
            smooth: self.smooth(),
        })
    }

    /// Validates the defining properties of `ℓ_x` on `n_dirs` seeded random
    /// directions rescaled to the unit sphere of `self`.
    pub fn duality_check(
        &self,
        x: &Vector,
        n_dirs: usize,
        seed: u64,
    ) -> Result<DualityReport, GeometryError> {
        let l = self.duality_functional(x)?.covector;
        let pairing_err = (l.eval(x) - self.value(x)).abs();
        let mut rng = seeded(seed);
        let mut excess = f64::NEG_INFINITY;
        let mut drawn = 0;
        while drawn < n_dirs {
            let u = Vector::new((0..x.dim()).map(|_| rng.random_range(-1.0..1.0)).collect());
            let n = self.value(&u);
            if n == 0.0 {
                continue;
            }
            let u = u.scale(1.0 / n);
            excess = excess.max(l.eval(&u) - self.value(&u));
            drawn += 1;
        }
        Ok(DualityReport {
            pairing_err,
            dual_norm_excess: if n_dirs == 0 { 0.0 } else { excess },
        })
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Euclidean => write!(f, "euclidean"),
            NormSpec::L1 => write!(f, "l1"),
            NormSpec::LInf => write!(f, "linf"),
            NormSpec::PNorm(p) => write!(f, "p_norm({})", p.get()),
            NormSpec::RoundedLInf(r) => write!(f, "rounded_linf({})", r.get()),
        }
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn p_norm_value(c: &[f64], p: f64) -> f64 {
    let m = c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * c.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn p_norm_gradient(c: &[f64], p: f64) -> Vec<f64> {
    let m = c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let u: Vec<f64> = c.iter().map(|v| v / m).collect();
    let n = p_norm_value(&u, p);
    u.iter()
        .map(|v| sign(*v) * (v.abs() / n).powf(p - 1.0))
        .collect()
}

/// Gauge of `(1-r)·[-1,1]ⁿ + r·B₂` at `c`.
///
/// `c/t` lies on the boundary iff the Euclidean distance from `|c|/t` to the
/// cube `(1-r)[0,1]ⁿ` equals `r`. With `a` the sorted absolute coordinates,
/// `s = 1 - r` and the `k` largest coordinates active, this is
/// `Σ_{i≤k} (a_i - t s)² = t² r²`; `k = 1` is the flat face `t = a_1`.
fn rounded_gauge(c: &[f64], r: f64) -> f64 {
    rounded_gauge_active(c, r).0
}

fn rounded_gauge_active(c: &[f64], r: f64) -> (f64, usize) {
    let mut a: Vec<f64> = c.iter().map(|v| v.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    let top = a.first().copied().unwrap_or(0.0);
    if top == 0.0 || !top.is_finite() {
        return (top, 1);
    }
    // normalize to keep the quadratic well conditioned
    let a: Vec<f64> = a.iter().map(|v| v / top).collect();
    let s = 1.0 - r;
    let slack = 1e-13;
    let mut sum1 = 0.0;
    let mut sum2 = 0.0;
    for k in 1..=a.len() {
        sum1 += a[k - 1];
        sum2 += a[k - 1] * a[k - 1];
        let t = if k == 1 {
            a[0]
        } else {
            let qa = k as f64 * s * s - r * r;
            let qb = 2.0 * s * sum1;
            let disc = (qb * qb - 4.0 * qa * sum2).max(0.0);
            // smaller root, in the cancellation-free form
            2.0 * sum2 / (qb + disc.sqrt())
        };
        let next = a.get(k).copied().unwrap_or(0.0);
        if next <= t * s + slack && a[k - 1] >= t * s - slack {
            return (top * t, k);
        }
    }
    (top * bisect_rounded(&a, r), a.len())
}

fn bisect_rounded(a: &[f64], r: f64) -> f64 {
    let s = 1.0 - r;
    let phi = |t: f64| {
        a.iter()
            .map(|v| (v - t * s).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt()
            - t * r
    };
    let (mut lo, mut hi) = (0.0, a[0] / s.max(r) * 2.0 + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn rounded_gradient(c: &[f64], r: f64) -> Vec<f64> {
    let (t, k) = rounded_gauge_active(c, r);
    if k == 1 {
        let m = c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let i = c.iter().position(|v| v.abs() == m).unwrap_or(0);
        let mut out = vec![0.0; c.len()];
        out[i] = sign(c[i]);
        return out;
    }
    // outward normal of the rounded ball at c/t, scaled so that ℓ(c) = t
    let s = 1.0 - r;
    let normal: Vec<f64> = c
        .iter()
        .map(|&v| sign(v) * (v.abs() / t - s).max(0.0))
        .collect();
    let along: f64 = normal.iter().zip(c).map(|(n, v)| n * v).sum();
    normal.iter().map(|n| n * t / along).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec())
    }

    #[test]
    fn basic_values() {
        assert_eq!(NormSpec::L1.value(&v(&[3.0, -4.0])), 7.0);
        assert_eq!(NormSpec::Euclidean.value(&v(&[3.0, 4.0])), 5.0);
        assert_eq!(NormSpec::LInf.value(&v(&[3.0, -4.0])), 4.0);
        let p4 = NormSpec::p_norm(4.0).unwrap();
        assert!((p4.value(&v(&[1.0, 1.0])) - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert_eq!(NormSpec::p_norm(1.0), Err(GeometryError::InvalidExponent(1.0)));
        assert!(NormSpec::p_norm(0.5).is_err());
        assert!(NormSpec::p_norm(f64::NAN).is_err());
        assert!(NormSpec::rounded_linf(0.0).is_err());
        assert!(NormSpec::rounded_linf(0.51).is_err());
        assert!(NormSpec::rounded_linf(0.5).is_ok());
    }

    #[test]
    fn rounded_flat_face() {
        let n = NormSpec::rounded_linf(0.5).unwrap();
        assert_eq!(n.value(&v(&[1.0, 0.25])), 1.0);
        for y in [-0.5, -0.3, 0.0, 0.49, 0.5] {
            assert_eq!(n.value(&v(&[1.0, y])), 1.0, "y = {y}");
            assert_eq!(n.value(&v(&[y, -1.0])), 1.0, "y = {y}");
        }
    }

    /// Independent route: bisection on t for membership of (1,1)/t in the
    /// rounded square, tested geometrically via the corner disk.
    #[test]
    fn rounded_diagonal_matches_bisection() {
        let r = 0.5;
        let inside = |p: [f64; 2]| {
            let (x, y) = (p[0].abs(), p[1].abs());
            if x > 1.0 || y > 1.0 {
                return false;
            }
            if x <= 1.0 - r || y <= 1.0 - r {
                return true;
            }
            (x - (1.0 - r)).powi(2) + (y - (1.0 - r)).powi(2) <= r * r
        };
        let (mut lo, mut hi) = (0.5, 2.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if inside([1.0 / mid, 1.0 / mid]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let n = NormSpec::rounded_linf(r).unwrap();
        let got = n.value(&v(&[1.0, 1.0]));
        assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
        // closed form 4 - 2√2 from the arc quadratic
        assert!((got - (4.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn duality_examples() {
        let l = NormSpec::Euclidean.duality_functional(&v(&[3.0, 4.0])).unwrap();
        assert!(l.smooth);
        assert!((l.covector[0] - 0.6).abs() < 1e-15 && (l.covector[1] - 0.8).abs() < 1e-15);

        let p4 = NormSpec::p_norm(4.0).unwrap();
        let x = v(&[1.0, 1.0]);
        let l = p4.duality_functional(&x).unwrap().covector;
        let expect = 2f64.powf(-0.75);
        assert!((l[0] - expect).abs() < 1e-15 && (l[1] - expect).abs() < 1e-15);
        assert!((l.eval(&x) - 2f64.powf(0.25)).abs() < 1e-15);

        let rounded = NormSpec::rounded_linf(0.5).unwrap();
        let l = rounded.duality_functional(&v(&[1.0, 0.2])).unwrap().covector;
        assert_eq!(l.coeffs(), &[1.0, 0.0]);
    }

    #[test]
    fn nonsmooth_selections() {
        let l = NormSpec::L1.duality_functional(&v(&[2.0, 0.0, -1.0])).unwrap();
        assert!(!l.smooth);
        assert_eq!(l.covector.coeffs(), &[1.0, 0.0, -1.0]);
        let l = NormSpec::LInf.duality_functional(&v(&[-3.0, 3.0])).unwrap();
        assert_eq!(l.covector.coeffs(), &[-1.0, 0.0]);
    }

    #[test]
    fn origin_is_rejected() {
        for n in [NormSpec::Euclidean, NormSpec::L1, NormSpec::rounded_linf(0.3).unwrap()] {
            assert_eq!(n.duality_functional(&v(&[0.0, 0.0])), Err(GeometryError::Origin));
        }
    }

    #[test]
    fn duality_check_examples() {
        let rep = NormSpec::Euclidean.duality_check(&v(&[1.0, 0.0]), 100, 3).unwrap();
        assert_eq!(rep.pairing_err, 0.0);
        assert!(rep.dual_norm_excess <= 0.0);

        let p4 = NormSpec::p_norm(4.0).unwrap();
        let rep = p4.duality_check(&v(&[1.0, 2.0]), 1000, 11).unwrap();
        assert!(rep.pairing_err <= 1e-12);
        assert!(rep.dual_norm_excess <= 1e-12);

        let rounded = NormSpec::rounded_linf(0.5).unwrap();
        let rep = rounded.duality_check(&v(&[1.0, 0.2]), 500, 5).unwrap();
        assert_eq!(rep.pairing_err, 0.0);
        assert!(rep.dual_norm_excess <= 1e-12);
    }

    #[test]
    fn dual_norm_of_duality_functional_is_one() {
        let specs = [
            NormSpec::Euclidean,
            NormSpec::L1,
            NormSpec::LInf,
            NormSpec::p_norm(3.0).unwrap(),
            NormSpec::rounded_linf(0.25).unwrap(),
        ];
        for n in specs {
            for x in [v(&[0.3, -0.9]), v(&[1.0, 1.0]), v(&[-2.0, 0.1, 0.7])] {
                let l = n.duality_functional(&x).unwrap().covector;
                assert!((n.dual_value(&l) - 1.0).abs() < 1e-12, "{n} at {x}");
            }
        }
    }

    #[test]
    fn rounded_gauge_in_three_dimensions() {
        let n = NormSpec::rounded_linf(0.5).unwrap();
        // corner direction: |x|/t - 1/2 = (1/2)/√3 per axis
        let t = n.value(&v(&[1.0, 1.0, 1.0]));
        assert!((t - 1.0 / (0.5 + 0.5 / 3f64.sqrt())).abs() < 1e-12);
    }
}
