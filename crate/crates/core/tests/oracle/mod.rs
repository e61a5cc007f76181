//! Closed forms and brute-force reference computations, written without
//! the library so that tests compare two independent derivations.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn g_forward(alpha: f64, t: f64) -> f64 {
    let l = 1.0 - t;
    l * (alpha - 1.0) / (2.0 * (1.0 - alpha * l))
}

/// Inverts `g_forward` on `[0, 1]` by bisection (g is decreasing in λ = 1 - t,
/// so increasing in t).
pub fn g_inverse_bisect(alpha: f64, mu: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g_forward(alpha, mid) < mu {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The inverse exactly as printed in the source text, denominator
/// `α - 1 - 2αμ`.
pub fn g_inverse_printed(alpha: f64, mu: f64) -> f64 {
    (alpha - 1.0) * (1.0 + 2.0 * mu) / (alpha - 1.0 - 2.0 * alpha * mu)
}

pub fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln().sin()
    }
}

/// `x_λ` of the triangle map: `(ε₀ sin ln(1-λ), (α-1) / (2(1-αλ)))`.
pub fn appendix_a_x(alpha: f64, eps0: f64, lambda: f64) -> [f64; 2] {
    [
        eps0 * (1.0 - lambda).ln().sin(),
        (alpha - 1.0) / (2.0 * (1.0 - alpha * lambda)),
    ]
}

/// Supremum of `|d/dμ h(g⁻¹(μ))|` on `[-1/2, 0]` from the chain rule, on a
/// dense sample.
pub fn h_ginv_lipschitz(alpha: f64, n: usize) -> f64 {
    let a = alpha;
    (1..n)
        .map(|i| {
            let mu = -0.5 * i as f64 / n as f64;
            let den = a - 1.0 + 2.0 * a * mu;
            let t = (a - 1.0) * (1.0 + 2.0 * mu) / den;
            // dt/dμ by the quotient rule
            let dt = (2.0 * (a - 1.0) * den - (a - 1.0) * (1.0 + 2.0 * mu) * 2.0 * a) / (den * den);
            let dh = if t > 0.0 { t.ln().sin() + t.ln().cos() } else { 0.0 };
            (dh * dt).abs()
        })
        .fold(0.0, f64::max)
}

/// Euclidean distance from `z` to the cube `[-s, s]ⁿ`.
fn dist_to_cube(z: &[f64], s: f64) -> f64 {
    z.iter().map(|v| (v.abs() - s).max(0.0).powi(2)).sum::<f64>().sqrt()
}

/// Gauge of `(1-r)[-1,1]ⁿ + r B₂` by bisection on the membership test
/// `dist(x/t, (1-r)[-1,1]ⁿ) ≤ r`.
pub fn rounded_gauge_bisect(x: &[f64], r: f64) -> f64 {
    let inside = |t: f64| {
        let z: Vec<f64> = x.iter().map(|v| v / t).collect();
        dist_to_cube(&z, 1.0 - r) <= r
    };
    let mut hi = x.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Central-difference gradient with step `rel · max(|x|∞, 1)`.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], rel: f64) -> Vec<f64> {
    let h = rel * x.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            (f(&p) - f(&m)) / (2.0 * h)
        })
        .collect()
}

pub fn clamp_box(a: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    a.iter().zip(bounds).map(|(v, (lo, hi))| v.clamp(*lo, *hi)).collect()
}

/// Nearest point of the closed disk `B(c, r)` to `p`.
pub fn project_disk(p: [f64; 2], c: [f64; 2], r: f64) -> [f64; 2] {
    let d = [p[0] - c[0], p[1] - c[1]];
    let n = d[0].hypot(d[1]);
    if n <= r {
        p
    } else {
        [c[0] + r * d[0] / n, c[1] + r * d[1] / n]
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Oracle sampling uses `StdRng`, a different stream from the library's
/// ChaCha8, so sampled points are not shared with the code under test.
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn uniform_point(rng: &mut StdRng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(lo..hi)).collect()
}
