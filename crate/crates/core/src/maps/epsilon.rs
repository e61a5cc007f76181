//! The oscillating horizontal drift `ε = ε₀ · h ∘ g⁻¹` that makes the
//! λ-fixed points on the ℓ¹ triangle spiral without converging.
//!
//! `g(t) = (1-t)(α-1) / (2(1 - α(1-t)))` maps `[0, 1]` increasingly onto
//! `[-1/2, 0]`, and `h(x) = x sin(ln x)` is Lipschitz with `|h'| ≤ √2`.

use super::MapError;

/// Tolerance on range preconditions, matching domain membership slack.
const RANGE_TOL: f64 = 1e-12;

pub const DEFAULT_SAFETY: f64 = 0.9;
pub const DEFAULT_GRID: usize = 100_000;
/// Grid used to verify the Lipschitz and containment invariants at construction.
const VERIFY_GRID: usize = 10_000;

fn check_alpha(alpha: f64) -> Result<(), MapError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(MapError::OutOfRange {
            what: "alpha",
            value: alpha,
        })
    }
}

fn in_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64, MapError> {
    if value >= lo - RANGE_TOL && value <= hi + RANGE_TOL {
        Ok(value.clamp(lo, hi))
    } else {
        Err(MapError::OutOfRange { what, value })
    }
}

pub fn g_forward(alpha: f64, t: f64) -> Result<f64, MapError> {
    check_alpha(alpha)?;
    let t = in_range("t", t, 0.0, 1.0)?;
    Ok(g_forward_raw(alpha, t))
}

fn g_forward_raw(alpha: f64, t: f64) -> f64 {
    let lambda = 1.0 - t;
    lambda * (alpha - 1.0) / (2.0 * (1.0 - alpha * lambda))
}

/// Inverse of [`g_forward`]: solving `μ = g(t)`, which is linear in `1 - t`,
/// gives `t = (α-1)(1+2μ) / (α-1+2αμ)`.
pub fn g_inverse(alpha: f64, mu: f64) -> Result<f64, MapError> {
    check_alpha(alpha)?;
    let mu = in_range("mu", mu, -0.5, 0.0)?;
    Ok(g_inverse_raw(alpha, mu))
}

fn g_inverse_raw(alpha: f64, mu: f64) -> f64 {
    ((alpha - 1.0) * (1.0 + 2.0 * mu) / (alpha - 1.0 + 2.0 * alpha * mu)).clamp(0.0, 1.0)
}

/// `h(x) = x sin(ln x)`, extended by continuity with `h(0) = 0`.
pub fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln().sin()
    }
}

/// The ε-profile of the divergent triangle map, with `α ∈ (0, 1)` the
/// vertical contraction and `ε₀ > 0` the drift amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonProfile {
    alpha: f64,
    eps0: f64,
}

impl EpsilonProfile {
    /// Validates `ε(-1/2) = 0`, the `(1-α)`-Lipschitz bound and the
    /// containment condition `|ε(y)| ≤ (1-α)(y + 1/2)` on a grid.
    pub fn new(alpha: f64, eps0: f64) -> Result<Self, MapError> {
        check_alpha(alpha)?;
        if !(eps0.is_finite() && eps0 > 0.0) {
            return Err(MapError::OutOfRange {
                what: "eps0",
                value: eps0,
            });
        }
        let profile = EpsilonProfile { alpha, eps0 };
        let lip = profile.grid_lipschitz(VERIFY_GRID);
        if lip > (1.0 - alpha) * (1.0 + 1e-9) {
            return Err(MapError::InvalidParameter(format!(
                "eps0 = {eps0} too large: epsilon has grid Lipschitz constant {lip} > 1 - alpha = {}",
                1.0 - alpha
            )));
        }
        if let Some(y) = profile.containment_violation(VERIFY_GRID) {
            return Err(MapError::InvalidParameter(format!(
                "|eps(y)| exceeds (1 - alpha)(y + 1/2) at y = {y}"
            )));
        }
        Ok(profile)
    }

    /// Profile with `ε₀` chosen by [`calibrate_eps0`].
    pub fn calibrated(alpha: f64, safety: f64, grid_n: usize) -> Result<Self, MapError> {
        Self::new(alpha, calibrate_eps0(alpha, safety, grid_n)?)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn g_forward(&self, t: f64) -> Result<f64, MapError> {
        g_forward(self.alpha, t)
    }

    pub fn g_inverse(&self, mu: f64) -> Result<f64, MapError> {
        g_inverse(self.alpha, mu)
    }

    /// `ε(y) = ε₀ h(g⁻¹(y))` on `[-1/2, 0]`, constant `ε(0)` on `(0, 1/2]`.
    pub fn epsilon(&self, y: f64) -> Result<f64, MapError> {
        let y = in_range("y", y, -0.5, 0.5)?;
        Ok(self.epsilon_raw(y))
    }

    pub(crate) fn epsilon_raw(&self, y: f64) -> f64 {
        let mu = y.clamp(-0.5, 0.0);
        self.eps0 * h(g_inverse_raw(self.alpha, mu))
    }

    /// Largest difference quotient of ε over a uniform grid of `[-1/2, 1/2]`.
    pub fn grid_lipschitz(&self, n: usize) -> f64 {
        let ys = grid(-0.5, 0.5, n);
        ys.windows(2)
            .map(|w| (self.epsilon_raw(w[1]) - self.epsilon_raw(w[0])).abs() / (w[1] - w[0]))
            .fold(0.0, f64::max)
    }

    fn containment_violation(&self, n: usize) -> Option<f64> {
        grid(-0.5, 0.5, n).into_iter().find(|&y| {
            self.epsilon_raw(y).abs() > (1.0 - self.alpha) * (y + 0.5) + RANGE_TOL
        })
    }

    /// First coordinate of the λ-fixed point `x_λ` in closed form:
    /// `ε(g(1-λ)) / (1-λ) = ε₀ sin(ln(1-λ))`.
    pub fn x_lambda_first(&self, lambda: f64) -> f64 {
        self.eps0 * (1.0 - lambda).ln().sin()
    }

    /// Second coordinate of `x_λ`: `(α-1) / (2(1-αλ))`.
    pub fn x_lambda_second(&self, lambda: f64) -> f64 {
        (self.alpha - 1.0) / (2.0 * (1.0 - self.alpha * lambda))
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Largest `ε₀` (up to `safety`) for which `ε₀ h ∘ g⁻¹` is `(1-α)`-Lipschitz:
/// `ε₀ = safety · (1-α) / L` with `L` the maximal difference quotient of
/// `h ∘ g⁻¹` on a uniform grid of `grid_n` points of `[-1/2, 0]`.
pub fn calibrate_eps0(alpha: f64, safety: f64, grid_n: usize) -> Result<f64, MapError> {
    check_alpha(alpha)?;
    if !(safety > 0.0 && safety < 1.0) {
        return Err(MapError::OutOfRange {
            what: "safety",
            value: safety,
        });
    }
    if grid_n < 1000 {
        return Err(MapError::InvalidParameter(format!(
            "calibration grid needs at least 1000 points, got {grid_n}"
        )));
    }
    let ys = grid(-0.5, 0.0, grid_n);
    let vals: Vec<f64> = ys.iter().map(|&y| h(g_inverse_raw(alpha, y))).collect();
    let lip = ys
        .windows(2)
        .zip(vals.windows(2))
        .map(|(y, v)| (v[1] - v[0]).abs() / (y[1] - y[0]))
        .fold(0.0, f64::max);
    Ok(safety * (1.0 - alpha) / lip)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection inverse of g_forward, independent of the algebraic inverse.
    fn bisect_inverse(alpha: f64, mu: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g_forward_raw(alpha, mid) < mu {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn g_endpoints_and_midpoint() {
        assert_eq!(g_forward(0.5, 0.0).unwrap(), -0.5);
        assert_eq!(g_forward(0.5, 1.0).unwrap(), 0.0);
        assert!((g_forward(0.5, 0.5).unwrap() + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn g_inverse_matches_bisection() {
        assert!((g_inverse(0.5, -1.0 / 6.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((bisect_inverse(0.5, -1.0 / 6.0) - 0.5).abs() < 1e-14);
        for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
            for i in 0..=50 {
                let mu = -0.5 + 0.5 * i as f64 / 50.0;
                let a = g_inverse(alpha, mu).unwrap();
                let b = bisect_inverse(alpha, mu);
                assert!((a - b).abs() < 1e-12, "alpha {alpha} mu {mu}: {a} vs {b}");
            }
        }
    }

    /// The inverse as printed in the source, with `- 2αμ` in the denominator,
    /// fails the round trip.
    #[test]
    fn printed_inverse_disagrees() {
        let printed = |a: f64, mu: f64| (a - 1.0) * (1.0 + 2.0 * mu) / (a - 1.0 - 2.0 * a * mu);
        let mu = g_forward(0.5, 0.5).unwrap();
        assert!((printed(0.5, mu) - 0.5).abs() > 0.4);
        assert!((g_inverse(0.5, mu).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn g_is_increasing() {
        for alpha in [0.25, 0.5, 0.75] {
            let vals: Vec<f64> = grid(0.0, 1.0, 1000)
                .into_iter()
                .map(|t| g_forward(alpha, t).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn out_of_range_arguments() {
        assert!(g_forward(0.5, 1.5).is_err());
        assert!(g_forward(1.0, 0.5).is_err());
        assert!(g_inverse(0.5, 0.1).is_err());
        assert!(g_inverse(0.5, -0.6).is_err());
        let p = EpsilonProfile::calibrated(0.5, 0.9, 10_000).unwrap();
        assert!(p.epsilon(0.7).is_err());
    }

    #[test]
    fn epsilon_values() {
        let p = EpsilonProfile::calibrated(0.5, 0.9, DEFAULT_GRID).unwrap();
        assert_eq!(p.epsilon(-0.5).unwrap(), 0.0);
        assert!(p.epsilon(0.0).unwrap().abs() < 1e-18);
        assert!(p.epsilon(0.3).unwrap().abs() < 1e-18);
        for t in [1e-6, 0.01, 0.3, 0.5, 0.77, 1.0] {
            let y = g_forward(0.5, t).unwrap();
            let expect = p.eps0() * t * t.ln().sin();
            assert!((p.epsilon(y).unwrap() - expect).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn calibration_floor_and_invariants() {
        // |h'| ≤ √2 and |dg⁻¹/dμ| ≤ 2/(1-α) give a floor on ε₀
        for alpha in [0.25, 0.5, 0.75] {
            let eps0 = calibrate_eps0(alpha, 0.9, DEFAULT_GRID).unwrap();
            let floor = 0.9 * (1.0 - alpha) * (1.0 - alpha) / (2.0 * 2f64.sqrt());
            assert!(eps0 >= floor, "alpha {alpha}: {eps0} < {floor}");
            let p = EpsilonProfile::new(alpha, eps0).unwrap();
            assert!(p.grid_lipschitz(100_000) <= 1.0 - alpha);
            for y in grid(-0.5, 0.5, 10_000) {
                assert!(p.epsilon(y).unwrap().abs() <= (1.0 - alpha) * (y + 0.5) + 1e-15);
            }
        }
        let eps0 = calibrate_eps0(0.5, 0.9, DEFAULT_GRID).unwrap();
        assert!(eps0 >= 0.9 * 0.5 / (4.0 * 2f64.sqrt()));
    }

    #[test]
    fn oversized_eps0_is_rejected() {
        assert!(matches!(
            EpsilonProfile::new(0.5, 1.0),
            Err(MapError::InvalidParameter(_))
        ));
    }
}
