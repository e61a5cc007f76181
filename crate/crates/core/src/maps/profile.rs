use super::MapError;

/// Scalar function `g : ℝ → ℝ` whose graph is the fixed-point set of the
/// vertical projection `(x, y) ↦ (x, g(x))`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarProfile {
    /// `offset + slope · |x|`
    AbsAffine { offset: f64, slope: f64 },
    /// Linear interpolation through knots sorted by abscissa, constant
    /// beyond the outer knots.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl Default for ScalarProfile {
    fn default() -> Self {
        ScalarProfile::AbsAffine {
            offset: 0.3,
            slope: 0.4,
        }
    }
}

impl ScalarProfile {
    pub fn piecewise_linear(mut knots: Vec<(f64, f64)>) -> Result<Self, MapError> {
        if knots.is_empty() || knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(MapError::InvalidParameter(
                "piecewise-linear profile needs finite knots".into(),
            ));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(MapError::InvalidParameter("duplicate knot abscissa".into()));
        }
        Ok(ScalarProfile::PiecewiseLinear { knots })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScalarProfile::AbsAffine { offset, slope } => offset + slope * x.abs(),
            ScalarProfile::PiecewiseLinear { knots } => {
                let first = knots[0];
                let last = knots[knots.len() - 1];
                if x <= first.0 {
                    return first.1;
                }
                if x >= last.0 {
                    return last.1;
                }
                let i = knots.partition_point(|k| k.0 <= x);
                let (a, b) = (knots[i - 1], knots[i]);
                a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
            }
        }
    }

    /// Exact Lipschitz constant.
    pub fn lipschitz(&self) -> f64 {
        match self {
            ScalarProfile::AbsAffine { slope, .. } => slope.abs(),
            ScalarProfile::PiecewiseLinear { knots } => knots
                .windows(2)
                .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
                .fold(0.0, f64::max),
        }
    }

    /// `max |g|` on `[-1, 1]`, attained at a breakpoint or an endpoint.
    pub fn max_abs_on_unit(&self) -> f64 {
        let mut pts = vec![-1.0, 0.0, 1.0];
        if let ScalarProfile::PiecewiseLinear { knots } = self {
            pts.extend(knots.iter().map(|k| k.0).filter(|x| x.abs() <= 1.0));
        }
        pts.into_iter().map(|x| self.eval(x).abs()).fold(0.0, f64::max)
    }
}
