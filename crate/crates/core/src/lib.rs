//! Fixed points of nonexpansive maps through λ-contractions.
//!
//! For a 1-Lipschitz self-map `f` of a convex compact set `C ∋ 0` and
//! `λ < 1`, the map `y ↦ λ f(y)` is a contraction with a unique fixed point
//! `y_λ`. This crate computes `y_λ` by Banach iteration, follows it as
//! `λ → 1`, and checks numerically whether the family converges and to what.
//!
//! * [`geometry`]: norms, gauges and duality functionals.
//! * [`domain`] and [`maps`]: convex domains and the catalog of maps,
//!   including two planar counterexamples.
//! * [`solver`]: λ-contraction solves, continuation, anchored variant and
//!   retraction grids.
//! * [`diagnostics`]: sampled checks returning [`diagnostics::CheckReport`]s.
//! * [`cli`]: JSON-configured experiments writing CSV, SVG and JSON.
//!
//! Runnable programs live in `examples/`: `appendix_a_divergence`,
//! `disk_projection_limit`, `coord_clamp_retraction`,
//! `appendix_b_nonconvex_fix`, `norm_geometry` and `experiment_config`.

pub mod cli;
pub mod diagnostics;
pub mod domain;
pub mod geometry;
pub mod maps;
pub mod rng;
pub mod solver;

pub use diagnostics::{CheckReport, FixSample};
pub use domain::ConvexDomain;
pub use geometry::{Covector, NormSpec, Vector};
pub use maps::{MapKind, MapSpec};
pub use solver::{LambdaSchedule, SolveOptions, SolveReport, Trajectory};
