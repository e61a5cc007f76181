//! Norm values, Minkowski gauges and duality functionals.

mod norm;
mod vector;

use thiserror::Error;

pub use norm::{CornerRadius, DualityFunctional, DualityReport, Exponent, NormSpec};
pub use vector::{Covector, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("duality functional undefined at origin")]
    Origin,
    #[error("p-norm exponent must be finite and > 1, got {0}")]
    InvalidExponent(f64),
    #[error("corner radius must lie in (0, 1/2], got {0}")]
    InvalidCornerRadius(f64),
    #[error("non-finite coordinates")]
    NonFinite,
}

pub fn norm_value(spec: &NormSpec, v: &Vector) -> f64 {
    spec.value(v)
}

pub fn duality_functional(spec: &NormSpec, x: &Vector) -> Result<DualityFunctional, GeometryError> {
    spec.duality_functional(x)
}

pub fn duality_check(
    spec: &NormSpec,
    x: &Vector,
    n_dirs: usize,
    seed: u64,
) -> Result<DualityReport, GeometryError> {
    spec.duality_check(x, n_dirs, seed)
}
