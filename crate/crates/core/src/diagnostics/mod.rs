//! Sampled numerical checks of the structural facts about nonexpansive maps
//! and their λ-fixed points.
//!
//! Every check returns a [`CheckReport`]. Samples are drawn sequentially
//! from a seeded generator and then evaluated in parallel; reductions pick
//! the first extreme value in sample order, so reports are reproducible from
//! `(seed, counts)` regardless of thread scheduling.

mod divergence;
mod fixset;
mod monotone;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{NormSpec, Vector};

pub use divergence::{check_convergence, check_norm_monotone, check_residuals, detect_divergence, DivergenceReport};
pub use fixset::{
    averaged_fixed_point, check_variational_limit, convexity_probe, sample_fixed_points,
    sample_fixed_points_averaged, uniqueness_probe, FixMethod, FixSample, DEFAULT_FIX_TOL,
};
pub use monotone::{check_duality_monotone, check_monotone};

/// Stable check names, used in reports and in map manifests.
pub mod names {
    pub const MONOTONE: &str = "monotone";
    pub const DUALITY_MONOTONE: &str = "duality_monotone";
    pub const NORM_MONOTONE: &str = "norm_monotone";
    pub const RESIDUALS: &str = "residual_contract";
    pub const CONVERGENCE: &str = "convergence";
    pub const VARIATIONAL_LIMIT: &str = "variational_limit";
    pub const UNIQUENESS: &str = "uniqueness";
    pub const FIX_CONVEXITY: &str = "fix_convexity";
    pub const RETRACTION_LIPSCHITZ: &str = "retraction_lipschitz";
    pub const RETRACTION_IDENTITY: &str = "retraction_identity";
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("{check} needs a smooth norm, got {norm}")]
    NonSmoothNorm { check: &'static str, norm: String },
    #[error("norm monotonicity is only asserted under the euclidean norm, got {0}")]
    NonEuclideanNorm(String),
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("fixed-point sample is empty")]
    EmptyFixSample,
    #[error("none of {n_starts} starts reached a fixed point within {max_iter} iterations")]
    NoConvergedStart { n_starts: usize, max_iter: usize },
    #[error("invalid diagnostic parameter: {0}")]
    InvalidParameter(String),
}

/// Outcome of one sampled check. `pass` holds exactly when `worst_value`
/// is on the right side of `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub worst_value: f64,
    pub bound: f64,
    pub worst_witness: Vec<Vector>,
    pub samples: usize,
    pub seed: Option<u64>,
    /// False for checks the map's manifest expects to fail.
    pub expected_pass: bool,
    /// False when the check's hypotheses do not hold for this map and norm;
    /// such reports are informational.
    pub applicable: bool,
    pub note: String,
}

impl CheckReport {
    pub(crate) fn new(name: &str, worst_value: f64, bound: f64, pass: bool) -> Self {
        CheckReport {
            name: name.to_string(),
            pass,
            worst_value,
            bound,
            worst_witness: Vec::new(),
            samples: 0,
            seed: None,
            expected_pass: true,
            applicable: true,
            note: String::new(),
        }
    }

    pub fn with_witness(mut self, witness: Vec<Vector>) -> Self {
        self.worst_witness = witness;
        self
    }

    pub fn with_samples(mut self, samples: usize, seed: Option<u64>) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Whether the outcome matches what is expected of the map.
    pub fn as_expected(&self) -> bool {
        !self.applicable || self.pass == self.expected_pass
    }
}

pub(crate) fn require_smooth(check: &'static str, norm: &NormSpec) -> Result<(), DiagnosticsError> {
    if norm.smooth() {
        Ok(())
    } else {
        Err(DiagnosticsError::NonSmoothNorm {
            check,
            norm: norm.to_string(),
        })
    }
}

/// Index of the first minimum (`want_min`) or maximum in `values`.
pub(crate) fn first_extreme(values: &[f64], want_min: bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        best = match best {
            None => Some(i),
            Some(b) if (want_min && v < values[b]) || (!want_min && v > values[b]) => Some(i),
            keep => keep,
        };
    }
    best
}
