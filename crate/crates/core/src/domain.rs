//! Convex compact domains: membership, sampling and Euclidean projection.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use thiserror::Error;

use crate::geometry::{Covector, Vector};
use crate::rng::SeededRng;

/// Membership tolerance; iterates may graze the boundary through rounding.
pub const CONTAINS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("dimension mismatch: domain has dim {expected}, point has dim {got}")]
    Dimension { expected: usize, got: usize },
    #[error("box bounds must be finite with lo <= hi")]
    InvalidBox,
    #[error("ball radius must be finite and > 0")]
    InvalidBall,
    #[error("half-space description is empty")]
    Empty,
    #[error("half-space description is unbounded")]
    Unbounded,
    #[error("half-space normals must be nonzero and finite with matching dimension")]
    InvalidHalfspace,
}

/// `normal · x ≤ offset`
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Covector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: impl Into<Covector>, offset: f64) -> Self {
        Halfspace {
            normal: normal.into(),
            offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Box { lo: Vector, hi: Vector },
    Ball { center: Vector, radius: f64 },
    /// `{(x, y) : -1/2 ≤ y ≤ -|x| + 1/2}`
    TriangleT,
    Halfspaces(Vec<Halfspace>),
}

/// A nonempty convex compact subset of ℝⁿ. Constructors validate the
/// description; the bounding box is cached for sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain {
    shape: Shape,
    lo: Vector,
    hi: Vector,
}

impl ConvexDomain {
    pub fn box_domain(lo: impl Into<Vector>, hi: impl Into<Vector>) -> Result<Self, DomainError> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo.dim() != hi.dim()
            || lo.dim() == 0
            || !lo.is_finite()
            || !hi.is_finite()
            || lo.coords().iter().zip(hi.coords()).any(|(a, b)| a > b)
        {
            return Err(DomainError::InvalidBox);
        }
        Ok(ConvexDomain {
            shape: Shape::Box {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            lo,
            hi,
        })
    }

    /// The cube `[-half_width, half_width]ⁿ`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self, DomainError> {
        Self::box_domain(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn ball(center: impl Into<Vector>, radius: f64) -> Result<Self, DomainError> {
        let center = center.into();
        if !(radius.is_finite() && radius > 0.0) || !center.is_finite() || center.dim() == 0 {
            return Err(DomainError::InvalidBall);
        }
        let lo = center.map(|c| c - radius);
        let hi = center.map(|c| c + radius);
        Ok(ConvexDomain {
            shape: Shape::Ball { center, radius },
            lo,
            hi,
        })
    }

    pub fn triangle_t() -> Self {
        ConvexDomain {
            shape: Shape::TriangleT,
            lo: Vector::from([-1.0, -0.5]),
            hi: Vector::from([1.0, 0.5]),
        }
    }

    pub fn halfspaces(list: Vec<Halfspace>) -> Result<Self, DomainError> {
        let dim = list.first().map(|h| h.normal.dim()).ok_or(DomainError::Empty)?;
        if dim == 0
            || list.iter().any(|h| {
                h.normal.dim() != dim
                    || !h.normal.is_finite()
                    || !h.offset.is_finite()
                    || h.normal.coeffs().iter().all(|&c| c == 0.0)
            })
        {
            return Err(DomainError::InvalidHalfspace);
        }
        if has_recession_direction(&list, dim) {
            return Err(DomainError::Unbounded);
        }
        let vertices = vertices(&list, dim);
        if vertices.is_empty() {
            return Err(DomainError::Empty);
        }
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for v in &vertices {
            for i in 0..dim {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        Ok(ConvexDomain {
            shape: Shape::Halfspaces(list),
            lo: lo.into(),
            hi: hi.into(),
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn bounding_box(&self) -> (&Vector, &Vector) {
        (&self.lo, &self.hi)
    }

    /// Largest coordinate extent of the bounding box.
    pub fn extent(&self) -> f64 {
        (&self.hi - &self.lo).max_abs()
    }

    pub fn contains(&self, x: &Vector) -> Result<bool, DomainError> {
        if x.dim() != self.dim() {
            return Err(DomainError::Dimension {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &Vector) -> bool {
        if !x.is_finite() {
            return false;
        }
        let tol = CONTAINS_TOL;
        match &self.shape {
            Shape::Box { lo, hi } => x
                .coords()
                .iter()
                .zip(lo.coords().iter().zip(hi.coords()))
                .all(|(v, (a, b))| *v >= a - tol && *v <= b + tol),
            Shape::Ball { center, radius } => x.distance(center) <= radius + tol,
            Shape::TriangleT => {
                let (px, py) = (x[0], x[1]);
                py >= -0.5 - tol && py <= -px.abs() + 0.5 + tol
            }
            Shape::Halfspaces(list) => list
                .iter()
                .all(|h| h.normal.eval(x) <= h.offset + tol),
        }
    }

    /// Uniform sample by rejection from the bounding box.
    pub fn sample(&self, rng: &mut SeededRng) -> Vector {
        loop {
            let p = Vector::new(
                self.lo
                    .coords()
                    .iter()
                    .zip(self.hi.coords())
                    .map(|(&a, &b)| if a == b { a } else { rng.random_range(a..=b) })
                    .collect(),
            );
            if self.contains_unchecked(&p) {
                return p;
            }
        }
    }

    /// Euclidean (nearest-point) projection onto the domain.
    pub fn project(&self, x: &Vector) -> Vector {
        match &self.shape {
            Shape::Box { lo, hi } => Vector::new(
                x.coords()
                    .iter()
                    .zip(lo.coords().iter().zip(hi.coords()))
                    .map(|(v, (a, b))| v.clamp(*a, *b))
                    .collect(),
            ),
            Shape::Ball { center, radius } => {
                let d = x - center;
                let n = d.euclidean();
                if n <= *radius {
                    x.clone()
                } else {
                    center + &d.scale(radius / n)
                }
            }
            Shape::TriangleT => {
                if self.contains_unchecked(x) {
                    return x.clone();
                }
                project_polytope(&triangle_halfspaces(), x)
            }
            Shape::Halfspaces(list) => {
                if self.contains_unchecked(x) {
                    return x.clone();
                }
                project_polytope(list, x)
            }
        }
    }

    /// Half-space description of polyhedral shapes (boxes included).
    pub fn as_halfspaces(&self) -> Option<Vec<Halfspace>> {
        match &self.shape {
            Shape::Box { lo, hi } => {
                let n = lo.dim();
                let mut out = Vec::with_capacity(2 * n);
                for i in 0..n {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    out.push(Halfspace::new(e.clone(), hi[i]));
                    e[i] = -1.0;
                    out.push(Halfspace::new(e, -lo[i]));
                }
                Some(out)
            }
            Shape::TriangleT => Some(triangle_halfspaces()),
            Shape::Halfspaces(list) => Some(list.clone()),
            Shape::Ball { .. } => None,
        }
    }
}

fn triangle_halfspaces() -> Vec<Halfspace> {
    vec![
        Halfspace::new([0.0, -1.0], 0.5),
        Halfspace::new([1.0, 1.0], 0.5),
        Halfspace::new([-1.0, 1.0], 0.5),
    ]
}

/// All `k`-subsets of `0..m`, in lexicographic order.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn normals(list: &[Halfspace], rows: &[usize], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), dim, |i, j| list[rows[i]].normal[j])
}

fn feasible(list: &[Halfspace], z: &Vector, tol: f64) -> bool {
    list.iter().all(|h| h.normal.eval(z) <= h.offset + tol)
}

fn vertices(list: &[Halfspace], dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for rows in subsets(list.len(), dim) {
        let a = normals(list, &rows, dim);
        let b = DVector::from_iterator(dim, rows.iter().map(|&i| list[i].offset));
        let Some(z) = a.lu().solve(&b) else { continue };
        let z = Vector::new(z.iter().copied().collect());
        if z.is_finite() && feasible(list, &z, 1e-9) {
            out.push(z);
        }
    }
    out
}

/// A nonzero `d` with `a_i · d ≤ 0` for every normal, i.e. an unbounded
/// direction (or a lineality when the normals do not span ℝⁿ).
fn has_recession_direction(list: &[Halfspace], dim: usize) -> bool {
    let all = normals(list, &(0..list.len()).collect::<Vec<_>>(), dim);
    if all.clone().svd(false, false).rank(1e-12) < dim {
        return true;
    }
    let candidates: Vec<DVector<f64>> = if dim == 1 {
        vec![DVector::from_element(1, 1.0)]
    } else {
        subsets(list.len(), dim - 1)
            .into_iter()
            .filter_map(|rows| {
                let mut m = DMatrix::zeros(dim, dim);
                for (i, &r) in rows.iter().enumerate() {
                    for j in 0..dim {
                        m[(i, j)] = list[r].normal[j];
                    }
                }
                let svd = m.svd(false, true);
                if svd.rank(1e-12) != dim - 1 {
                    return None;
                }
                let v_t = svd.v_t?;
                let (idx, _) = svd
                    .singular_values
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))?;
                Some(v_t.row(idx).transpose())
            })
            .collect()
    };
    candidates.iter().any(|d| {
        [1.0, -1.0].iter().any(|s| {
            list.iter().all(|h| {
                let dot: f64 = (0..dim).map(|j| h.normal[j] * d[j] * s).sum();
                dot <= 1e-12
            })
        })
    })
}

/// Nearest point of `{z : a_i·z ≤ b_i}` to `x` by active-set enumeration:
/// the projection is the unique KKT point, i.e. the feasible projection onto
/// some face's affine hull with nonnegative multipliers.
fn project_polytope(list: &[Halfspace], x: &Vector) -> Vector {
    let dim = x.dim();
    let mut best: Option<(f64, Vector)> = None;
    for k in 1..=dim.min(list.len()) {
        for rows in subsets(list.len(), k) {
            let a = normals(list, &rows, dim);
            let xv = DVector::from_column_slice(x.coords());
            let resid = DVector::from_iterator(
                k,
                rows.iter()
                    .enumerate()
                    .map(|(i, &r)| (a.row(i) * &xv)[0] - list[r].offset),
            );
            let gram = &a * a.transpose();
            let Some(mult) = gram.lu().solve(&resid) else { continue };
            let z = xv - a.transpose() * &mult;
            let z = Vector::new(z.iter().copied().collect());
            if !feasible(list, &z, 1e-10) {
                continue;
            }
            if mult.iter().all(|&m| m >= -1e-12) {
                return z;
            }
            // fallback bookkeeping in case of degenerate multipliers
            let d = z.distance(x);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, z));
            }
        }
    }
    best.map(|(_, z)| z).unwrap_or_else(|| x.clone())
}
