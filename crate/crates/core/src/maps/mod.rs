//! Nonexpansive self-maps of convex compact domains.
//!
//! A [`MapSpec`] pairs a map description ([`MapKind`]) with the domain it
//! maps into itself. Construction validates dimensions, spot-checks the
//! self-map property on a seeded sample, and records a norm under which the
//! map is 1-Lipschitz (its declared norm).

pub mod catalog;
mod epsilon;
mod profile;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::diagnostics::names;
use crate::domain::{ConvexDomain, DomainError, Shape};
use crate::geometry::{NormSpec, Vector};
use crate::rng::{seeded, SeededRng};

pub use epsilon::{calibrate_eps0, g_forward, g_inverse, h, EpsilonProfile, DEFAULT_GRID, DEFAULT_SAFETY};
pub use profile::ScalarProfile;

const SELF_MAP_SAMPLES: usize = 256;
const SELF_MAP_SEED: u64 = 0x5eed_f1c5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("invalid map parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("point {0} lies outside the map's domain")]
    OutsideDomain(Vector),
    #[error("map sends {input} to {output}, outside its domain")]
    NotSelfMap { input: Vector, output: Vector },
    #[error("map is not certified 1-Lipschitz under any supported norm: {0}")]
    NotNonexpansive(String),
}

/// `x ↦ A x + b` with `A` given by rows, declared 1-Lipschitz under `norm`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    rows: Vec<Vec<f64>>,
    offset: Vector,
    norm: NormSpec,
}

impl Affine {
    pub fn new(rows: Vec<Vec<f64>>, offset: impl Into<Vector>, norm: NormSpec) -> Result<Self, MapError> {
        let offset = offset.into();
        let n = offset.dim();
        if n == 0
            || rows.len() != n
            || rows.iter().any(|r| r.len() != n || r.iter().any(|c| !c.is_finite()))
            || !offset.is_finite()
        {
            return Err(MapError::InvalidParameter(
                "affine map needs a finite square matrix matching the offset".into(),
            ));
        }
        let affine = Affine { rows, offset, norm };
        match affine.operator_norm_bound(&norm) {
            Some(b) if b <= 1.0 + 1e-12 => Ok(affine),
            Some(b) => Err(MapError::NotNonexpansive(format!(
                "operator norm bound {b} > 1 under {norm}"
            ))),
            None => Err(MapError::NotNonexpansive(format!(
                "cannot bound the operator norm under {norm}"
            ))),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Affine {
            rows,
            offset: Vector::zeros(dim),
            norm: NormSpec::Euclidean,
        }
    }

    pub fn constant(value: Vector) -> Self {
        let n = value.dim();
        Affine {
            rows: vec![vec![0.0; n]; n],
            offset: value,
            norm: NormSpec::Euclidean,
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.dim()
    }

    fn apply(&self, x: &Vector) -> Vector {
        Vector::new(
            self.rows
                .iter()
                .zip(self.offset.coords())
                .map(|(r, b)| r.iter().zip(x.coords()).map(|(a, v)| a * v).sum::<f64>() + b)
                .collect(),
        )
    }

    fn matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.rows[i][j])
    }

    /// Exact operator norm for ℓ¹, ℓ² and ℓ∞; Riesz–Thorin bound for ℓᵖ;
    /// for the rounded norm only monomial matrices (one nonzero per row and
    /// column) are bounded, since that norm is absolute and symmetric.
    pub fn operator_norm_bound(&self, norm: &NormSpec) -> Option<f64> {
        let n = self.dim();
        let col_sum = (0..n)
            .map(|j| self.rows.iter().map(|r| r[j].abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let row_sum = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        match norm {
            NormSpec::L1 => Some(col_sum),
            NormSpec::LInf => Some(row_sum),
            NormSpec::Euclidean => Some(
                self.matrix()
                    .singular_values()
                    .iter()
                    .copied()
                    .fold(0.0, f64::max),
            ),
            NormSpec::PNorm(p) => {
                let p = p.get();
                Some(col_sum.powf(1.0 / p) * row_sum.powf(1.0 - 1.0 / p))
            }
            NormSpec::RoundedLInf(_) => {
                let monomial = self.rows.iter().all(|r| r.iter().filter(|c| **c != 0.0).count() <= 1)
                    && (0..n).all(|j| self.rows.iter().filter(|r| r[j] != 0.0).count() <= 1);
                monomial.then(|| {
                    self.rows
                        .iter()
                        .flatten()
                        .fold(0.0_f64, |m, c| m.max(c.abs()))
                })
            }
        }
    }
}

/// Description of a map; the owning [`MapSpec`] supplies the domain.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    /// `(x, y) ↦ (x + ε(y), α(y + 1/2) - 1/2)` on the triangle, 1-Lipschitz for ℓ¹.
    AppendixA(EpsilonProfile),
    /// `(x, y) ↦ (x, g(x))` with `g` ½-Lipschitz, 1-Lipschitz for ℓ∞.
    AppendixB(ScalarProfile),
    /// Nearest-point projection onto a convex target.
    EuclideanProjection(ConvexDomain),
    /// Coordinatewise clamp to `[lo_i, hi_i]`.
    CoordClamp(Vec<(f64, f64)>),
    Affine(Affine),
    /// Applied first to last.
    Composition(Vec<MapKind>),
    /// `Σ w_i f_i` with nonnegative weights summing to 1.
    ConvexCombination(Vec<(f64, MapKind)>),
}

impl MapKind {
    pub fn apply(&self, x: &Vector) -> Vector {
        match self {
            MapKind::AppendixA(p) => {
                let (px, py) = (x[0], x[1]);
                Vector::from([
                    px + p.epsilon_raw(py),
                    p.alpha() * (py + 0.5) - 0.5,
                ])
            }
            MapKind::AppendixB(g) => Vector::from([x[0], g.eval(x[0])]),
            MapKind::EuclideanProjection(target) => target.project(x),
            MapKind::CoordClamp(iv) => Vector::new(
                x.coords()
                    .iter()
                    .zip(iv)
                    .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
                    .collect(),
            ),
            MapKind::Affine(a) => a.apply(x),
            MapKind::Composition(list) => list.iter().fold(x.clone(), |acc, f| f.apply(&acc)),
            MapKind::ConvexCombination(list) => {
                let mut out = vec![0.0; x.dim()];
                for (w, f) in list {
                    for (o, v) in out.iter_mut().zip(f.apply(x).coords()) {
                        *o += w * v;
                    }
                }
                Vector::new(out)
            }
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            MapKind::AppendixA(_) | MapKind::AppendixB(_) => Some(2),
            MapKind::EuclideanProjection(t) => Some(t.dim()),
            MapKind::CoordClamp(iv) => Some(iv.len()),
            MapKind::Affine(a) => Some(a.dim()),
            MapKind::Composition(list) => {
                let dims: Vec<_> = list.iter().map(|f| f.dim()).collect::<Option<_>>()?;
                let first = *dims.first()?;
                dims.iter().all(|&d| d == first).then_some(first)
            }
            MapKind::ConvexCombination(list) => {
                let dims: Vec<_> = list.iter().map(|(_, f)| f.dim()).collect::<Option<_>>()?;
                let first = *dims.first()?;
                dims.iter().all(|&d| d == first).then_some(first)
            }
        }
    }

    /// Whether the map is known (by construction) to be 1-Lipschitz for `norm`.
    pub fn nonexpansive_under(&self, norm: &NormSpec) -> bool {
        match self {
            MapKind::AppendixA(_) => matches!(norm, NormSpec::L1),
            // |Δg| ≤ |Δx|/2 keeps differences on the flat faces of both balls
            MapKind::AppendixB(_) => matches!(norm, NormSpec::LInf | NormSpec::RoundedLInf(_)),
            MapKind::EuclideanProjection(t) => {
                norm.is_euclidean() || matches!(t.shape(), Shape::Box { .. })
            }
            // every supported norm is absolute, hence monotone in |coords|
            MapKind::CoordClamp(_) => true,
            MapKind::Affine(a) => {
                *norm == a.norm || a.operator_norm_bound(norm).is_some_and(|b| b <= 1.0 + 1e-12)
            }
            MapKind::Composition(list) => list.iter().all(|f| f.nonexpansive_under(norm)),
            MapKind::ConvexCombination(list) => list.iter().all(|(_, f)| f.nonexpansive_under(norm)),
        }
    }

    fn preferred_norm(&self) -> Option<NormSpec> {
        match self {
            MapKind::AppendixA(_) => Some(NormSpec::L1),
            MapKind::AppendixB(_) => Some(NormSpec::LInf),
            MapKind::EuclideanProjection(_) | MapKind::CoordClamp(_) => Some(NormSpec::Euclidean),
            MapKind::Affine(a) => Some(a.norm),
            MapKind::Composition(_) | MapKind::ConvexCombination(_) => None,
        }
    }

    fn validate(&self) -> Result<(), MapError> {
        match self {
            MapKind::AppendixA(_) => Ok(()),
            MapKind::AppendixB(g) => {
                if g.lipschitz() <= 0.5 {
                    Ok(())
                } else {
                    Err(MapError::InvalidParameter(format!(
                        "graph profile must be 1/2-Lipschitz, has constant {}",
                        g.lipschitz()
                    )))
                }
            }
            MapKind::EuclideanProjection(_) | MapKind::Affine(_) => Ok(()),
            MapKind::CoordClamp(iv) => {
                if iv.is_empty() || iv.iter().any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
                    Err(MapError::InvalidParameter("clamp intervals need finite lo <= hi".into()))
                } else {
                    Ok(())
                }
            }
            MapKind::Composition(list) => {
                if list.is_empty() {
                    return Err(MapError::InvalidParameter("empty composition".into()));
                }
                list.iter().try_for_each(|f| f.validate())
            }
            MapKind::ConvexCombination(list) => {
                if list.is_empty() {
                    return Err(MapError::InvalidParameter("empty convex combination".into()));
                }
                let total: f64 = list.iter().map(|(w, _)| w).sum();
                if list.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
                    return Err(MapError::InvalidParameter(format!(
                        "weights must be nonnegative and sum to 1 (sum {total})"
                    )));
                }
                list.iter().try_for_each(|(_, f)| f.validate())
            }
        }
    }

    fn default_name(&self) -> &'static str {
        match self {
            MapKind::AppendixA(_) => "appendix_a",
            MapKind::AppendixB(_) => "appendix_b",
            MapKind::EuclideanProjection(_) => "euclidean_projection",
            MapKind::CoordClamp(_) => "coord_clamp",
            MapKind::Affine(_) => "affine",
            MapKind::Composition(_) => "composition",
            MapKind::ConvexCombination(_) => "convex_combination",
        }
    }
}

/// Checks whose failure is the documented behaviour of a map.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Manifest {
    pub expected_failures: Vec<String>,
    pub note: String,
}

/// A validated 1-Lipschitz self-map of a convex compact domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    name: String,
    kind: MapKind,
    domain: ConvexDomain,
    declared_norm: NormSpec,
}

impl MapSpec {
    pub fn new(kind: MapKind, domain: ConvexDomain) -> Result<Self, MapError> {
        kind.validate()?;
        match kind.dim() {
            Some(d) if d == domain.dim() => {}
            _ => {
                return Err(MapError::InvalidParameter(format!(
                    "map dimension does not match domain dimension {}",
                    domain.dim()
                )))
            }
        }
        let candidates = kind.preferred_norm().into_iter().chain([
            NormSpec::Euclidean,
            NormSpec::L1,
            NormSpec::LInf,
        ]);
        let declared_norm = candidates
            .into_iter()
            .find(|n| kind.nonexpansive_under(n))
            .ok_or_else(|| MapError::NotNonexpansive(kind.default_name().into()))?;
        let spec = MapSpec {
            name: kind.default_name().to_string(),
            kind,
            domain,
            declared_norm,
        };
        spec.spot_check_self_map()?;
        Ok(spec)
    }

    /// The divergent map on the ℓ¹ triangle.
    pub fn appendix_a(profile: EpsilonProfile) -> Result<Self, MapError> {
        Self::new(MapKind::AppendixA(profile), ConvexDomain::triangle_t())
    }

    /// The vertical projection onto the graph of `g`, on `[-1,1] × [-M,M]`
    /// with `M = max |g|` over `[-1, 1]`.
    pub fn appendix_b(g: ScalarProfile) -> Result<Self, MapError> {
        let m = g.max_abs_on_unit();
        let domain = ConvexDomain::box_domain([-1.0, -m], [1.0, m])?;
        Self::new(MapKind::AppendixB(g), domain)
    }

    pub fn euclidean_projection(target: ConvexDomain, domain: ConvexDomain) -> Result<Self, MapError> {
        Self::new(MapKind::EuclideanProjection(target), domain)
    }

    pub fn coord_clamp(intervals: Vec<(f64, f64)>, domain: ConvexDomain) -> Result<Self, MapError> {
        Self::new(MapKind::CoordClamp(intervals), domain)
    }

    pub fn affine(affine: Affine, domain: ConvexDomain) -> Result<Self, MapError> {
        Self::new(MapKind::Affine(affine), domain)
    }

    pub fn identity(domain: ConvexDomain) -> Result<Self, MapError> {
        let dim = domain.dim();
        Self::new(MapKind::Affine(Affine::identity(dim)), domain).map(|m| m.with_name("identity"))
    }

    pub fn constant(value: Vector, domain: ConvexDomain) -> Result<Self, MapError> {
        Self::new(MapKind::Affine(Affine::constant(value)), domain).map(|m| m.with_name("constant"))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn domain(&self) -> &ConvexDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// A norm under which the map is 1-Lipschitz.
    pub fn declared_norm(&self) -> NormSpec {
        self.declared_norm
    }

    pub fn nonexpansive_under(&self, norm: &NormSpec) -> bool {
        self.kind.nonexpansive_under(norm)
    }

    pub fn eval(&self, x: &Vector) -> Result<Vector, MapError> {
        if !self.domain.contains(x)? {
            return Err(MapError::OutsideDomain(x.clone()));
        }
        Ok(self.kind.apply(x))
    }

    /// Evaluation without the domain check, for inner loops whose iterates
    /// stay in the domain by convexity.
    pub fn eval_unchecked(&self, x: &Vector) -> Vector {
        self.kind.apply(x)
    }

    fn spot_check_self_map(&self) -> Result<(), MapError> {
        let mut rng = seeded(SELF_MAP_SEED);
        for _ in 0..SELF_MAP_SAMPLES {
            let x = self.domain.sample(&mut rng);
            let y = self.kind.apply(&x);
            if !self.domain.contains_unchecked(&y) {
                return Err(MapError::NotSelfMap { input: x, output: y });
            }
        }
        Ok(())
    }

    pub fn manifest(&self) -> Manifest {
        let (expected, note): (&[&str], &str) = match &self.kind {
            MapKind::AppendixA(_) => (
                &[names::CONVERGENCE],
                "l1 triangle map: lambda-fixed points oscillate and do not converge as lambda -> 1",
            ),
            MapKind::AppendixB(_) => (
                &[names::FIX_CONVEXITY],
                "graph projection: Fix(f) is the graph of g, which is not convex",
            ),
            _ => (&[], "all lemmas are expected to hold"),
        };
        Manifest {
            expected_failures: expected.iter().map(|s| s.to_string()).collect(),
            note: note.to_string(),
        }
    }

    /// Exact fixed points for maps whose fixed-point set is known in closed
    /// form. One-dimensional sets are sampled on a uniform grid including the
    /// endpoints; full-dimensional ones uniformly at random.
    pub fn analytic_fixed_points(&self, n: usize, rng: &mut SeededRng) -> Option<Vec<Vector>> {
        let line = |n: usize| -> Vec<f64> {
            if n == 1 {
                return vec![0.0];
            }
            (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect()
        };
        match &self.kind {
            MapKind::AppendixA(_) => Some(line(n).into_iter().map(|x| Vector::from([x, -0.5])).collect()),
            MapKind::AppendixB(g) => Some(
                line(n)
                    .into_iter()
                    .map(|x| Vector::from([x, g.eval(x)]))
                    .collect(),
            ),
            MapKind::EuclideanProjection(target) => {
                Some((0..n).map(|_| target.sample(rng)).collect())
            }
            MapKind::CoordClamp(iv) => {
                let lo: Vec<f64> = iv.iter().map(|i| i.0).collect();
                let hi: Vec<f64> = iv.iter().map(|i| i.1).collect();
                let fixed = ConvexDomain::box_domain(lo, hi).ok()?;
                let mut out = Vec::with_capacity(n);
                let mut tries = 0;
                while out.len() < n && tries < 100 * n.max(1) {
                    tries += 1;
                    let p = fixed.sample(rng);
                    if self.domain.contains_unchecked(&p) {
                        out.push(p);
                    }
                }
                Some(out)
            }
            MapKind::Affine(a) if a.rows.iter().all(|r| r.iter().all(|&c| c == 0.0)) => {
                Some(vec![a.offset.clone()])
            }
            MapKind::Affine(a) if a.rows == Affine::identity(a.dim()).rows && a.offset.is_zero() => {
                Some((0..n).map(|_| self.domain.sample(rng)).collect())
            }
            _ => None,
        }
    }

    /// Largest observed ratio `‖f(x) - f(x')‖ / ‖x - x'‖` over `n_pairs`
    /// seeded random distinct pairs of the domain; 0 for a one-point domain.
    pub fn lipschitz_estimate(&self, norm: &NormSpec, n_pairs: usize, seed: u64) -> f64 {
        if self.domain.extent() == 0.0 {
            return 0.0;
        }
        let mut rng = seeded(seed);
        let mut worst = 0.0_f64;
        let mut drawn = 0;
        while drawn < n_pairs {
            let x = self.domain.sample(&mut rng);
            let y = self.domain.sample(&mut rng);
            let d = norm.value(&(&x - &y));
            if d == 0.0 {
                continue;
            }
            let fd = norm.value(&(&self.kind.apply(&x) - &self.kind.apply(&y)));
            worst = worst.max(fd / d);
            drawn += 1;
        }
        worst
    }
}

pub fn map_eval(map: &MapSpec, x: &Vector) -> Result<Vector, MapError> {
    map.eval(x)
}

pub fn lipschitz_estimate(map: &MapSpec, norm: &NormSpec, n_pairs: usize, seed: u64) -> f64 {
    map.lipschitz_estimate(norm, n_pairs, seed)
}

pub fn domain_contains(domain: &ConvexDomain, x: &Vector) -> Result<bool, DomainError> {
    domain.contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::catalog;

    #[test]
    fn appendix_a_bottom_edge_is_fixed() {
        for alpha in [0.25, 0.5, 0.75] {
            let map = catalog::appendix_a(alpha).unwrap();
            for x in [-1.0, -0.3, 0.0, 0.8] {
                let p = Vector::from([x, -0.5]);
                assert_eq!(map.eval(&p).unwrap(), p);
            }
        }
    }

    #[test]
    fn appendix_b_graph_projection() {
        let map = catalog::appendix_b().unwrap();
        let out = map.eval(&Vector::from([0.5, -0.2])).unwrap();
        assert_eq!(out, Vector::from([0.5, 0.5]));
        let (lo, hi) = map.domain().bounding_box();
        assert_eq!((lo[1], hi[1]), (-0.7, 0.7));
    }

    #[test]
    fn disk_projection_of_origin() {
        let map = catalog::disk_projection().unwrap();
        let out = map.eval(&Vector::from([0.0, 0.0])).unwrap();
        assert!(out.distance(&Vector::from([0.42, 0.56])) < 1e-15);
    }

    #[test]
    fn eval_outside_domain() {
        let map = catalog::appendix_a(0.5).unwrap();
        assert!(matches!(
            map.eval(&Vector::from([0.0, 0.6])),
            Err(MapError::OutsideDomain(_))
        ));
        assert!(matches!(
            map.eval(&Vector::from([0.0, 0.0, 0.0])),
            Err(MapError::Domain(DomainError::Dimension { .. }))
        ));
    }

    #[test]
    fn rejects_non_self_maps() {
        let domain = ConvexDomain::cube(2, 1.0).unwrap();
        let err = MapSpec::constant(Vector::from([2.0, 0.0]), domain.clone()).unwrap_err();
        assert!(matches!(err, MapError::NotSelfMap { .. }));
        let err = MapSpec::coord_clamp(vec![(1.5, 2.0), (0.0, 1.0)], domain).unwrap_err();
        assert!(matches!(err, MapError::NotSelfMap { .. }));
    }

    #[test]
    fn rejects_steep_graph_profile() {
        let g = ScalarProfile::AbsAffine {
            offset: 0.0,
            slope: 0.6,
        };
        assert!(matches!(MapSpec::appendix_b(g), Err(MapError::InvalidParameter(_))));
    }

    #[test]
    fn affine_certification() {
        let rot = |t: f64| vec![vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]];
        assert!(Affine::new(rot(0.7), [0.0, 0.0], NormSpec::Euclidean).is_ok());
        assert!(matches!(
            Affine::new(rot(0.7), [0.0, 0.0], NormSpec::L1),
            Err(MapError::NotNonexpansive(_))
        ));
        let swap = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        let a = Affine::new(swap, [0.0, 0.0], NormSpec::rounded_linf(0.5).unwrap()).unwrap();
        assert!(MapKind::Affine(a).nonexpansive_under(&NormSpec::p_norm(4.0).unwrap()));
    }

    #[test]
    fn lipschitz_of_trivial_maps() {
        let domain = ConvexDomain::cube(2, 1.0).unwrap();
        let id = MapSpec::identity(domain.clone()).unwrap();
        let c = MapSpec::constant(Vector::from([0.1, 0.2]), domain).unwrap();
        for n in [NormSpec::Euclidean, NormSpec::L1, NormSpec::rounded_linf(0.5).unwrap()] {
            assert!((id.lipschitz_estimate(&n, 500, 1) - 1.0).abs() < 1e-12);
            assert_eq!(c.lipschitz_estimate(&n, 500, 1), 0.0);
        }
        let point = ConvexDomain::box_domain([0.0, 0.0], [0.0, 0.0]).unwrap();
        let id = MapSpec::identity(point).unwrap();
        assert_eq!(id.lipschitz_estimate(&NormSpec::Euclidean, 10, 1), 0.0);
    }

    #[test]
    fn composition_and_combination() {
        let domain = ConvexDomain::cube(2, 1.0).unwrap();
        let clamp = MapKind::CoordClamp(vec![(0.2, 0.8), (-0.5, 0.5)]);
        let disk = MapKind::EuclideanProjection(ConvexDomain::ball([0.6, 0.8], 0.3).unwrap());
        let comp = MapSpec::new(MapKind::Composition(vec![clamp.clone(), disk.clone()]), domain.clone()).unwrap();
        assert_eq!(comp.declared_norm(), NormSpec::Euclidean);
        let x = Vector::from([0.0, 0.0]);
        let expect = disk.apply(&clamp.apply(&x));
        assert_eq!(comp.eval(&x).unwrap(), expect);

        let mix = MapSpec::new(
            MapKind::ConvexCombination(vec![(0.25, clamp.clone()), (0.75, disk.clone())]),
            domain.clone(),
        )
        .unwrap();
        let got = mix.eval(&x).unwrap();
        let want = &clamp.apply(&x).scale(0.25) + &disk.apply(&x).scale(0.75);
        assert!(got.distance(&want) < 1e-15);

        // ℓ¹-only and Euclidean-only components share no certified norm
        let tri = MapKind::AppendixA(EpsilonProfile::calibrated(0.5, 0.9, 10_000).unwrap());
        assert!(matches!(
            MapSpec::new(MapKind::Composition(vec![tri, disk]), ConvexDomain::triangle_t()),
            Err(MapError::NotNonexpansive(_))
        ));

        assert!(matches!(
            MapSpec::new(MapKind::ConvexCombination(vec![(0.5, clamp)]), domain),
            Err(MapError::InvalidParameter(_))
        ));
    }

    #[test]
    fn manifests() {
        assert_eq!(
            catalog::appendix_b().unwrap().manifest().expected_failures,
            vec![names::FIX_CONVEXITY.to_string()]
        );
        assert!(catalog::disk_projection().unwrap().manifest().expected_failures.is_empty());
    }
}
