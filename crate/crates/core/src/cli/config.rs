//! JSON experiment descriptors and their validation into library objects.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::diagnostics::DEFAULT_FIX_TOL;
use crate::domain::{ConvexDomain, Halfspace};
use crate::geometry::{NormSpec, Vector};
use crate::maps::{catalog, Affine, EpsilonProfile, MapKind, MapSpec, ScalarProfile, DEFAULT_GRID, DEFAULT_SAFETY};
use crate::solver::{LambdaSchedule, SolveOptions, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormConfig {
    Euclidean,
    L1,
    Linf,
    PNorm { p: f64 },
    RoundedLinf { r: f64 },
}

impl NormConfig {
    pub fn build(&self) -> Result<NormSpec, CliError> {
        let norm = match *self {
            NormConfig::Euclidean => NormSpec::Euclidean,
            NormConfig::L1 => NormSpec::L1,
            NormConfig::Linf => NormSpec::LInf,
            NormConfig::PNorm { p } => NormSpec::p_norm(p).map_err(CliError::config)?,
            NormConfig::RoundedLinf { r } => NormSpec::rounded_linf(r).map_err(CliError::config)?,
        };
        Ok(norm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceConfig {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainConfig {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Cube { dim: usize, half_width: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    TriangleT,
    Halfspaces { constraints: Vec<HalfspaceConfig> },
}

impl DomainConfig {
    pub fn build(&self) -> Result<ConvexDomain, CliError> {
        let d = match self {
            DomainConfig::Box { lo, hi } => ConvexDomain::box_domain(lo.clone(), hi.clone()),
            DomainConfig::Cube { dim, half_width } => ConvexDomain::cube(*dim, *half_width),
            DomainConfig::Ball { center, radius } => ConvexDomain::ball(center.clone(), *radius),
            DomainConfig::TriangleT => Ok(ConvexDomain::triangle_t()),
            DomainConfig::Halfspaces { constraints } => ConvexDomain::halfspaces(
                constraints
                    .iter()
                    .map(|h| Halfspace::new(h.normal.clone(), h.offset))
                    .collect(),
            ),
        };
        d.map_err(CliError::config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    AbsAffine { offset: f64, slope: f64 },
    PiecewiseLinear { knots: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedMap {
    pub weight: f64,
    pub map: MapConfig,
}

/// Map descriptor. Composite maps build their children on the parent's
/// domain unless a child names its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapConfig {
    AppendixA {
        #[serde(default = "half")]
        alpha: f64,
        #[serde(default)]
        eps0: Option<f64>,
        #[serde(default)]
        safety: Option<f64>,
    },
    AppendixB {
        #[serde(default)]
        g: Option<ProfileConfig>,
    },
    DiskProjection,
    CoordClamp {
        #[serde(default)]
        intervals: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
    EuclideanProjection {
        target: DomainConfig,
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
        #[serde(default)]
        norm: Option<NormConfig>,
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
    Identity {
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
    Constant {
        value: Vec<f64>,
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
    Composition {
        maps: Vec<MapConfig>,
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
    ConvexCombination {
        maps: Vec<WeightedMap>,
        #[serde(default)]
        domain: Option<DomainConfig>,
    },
}

fn half() -> f64 {
    0.5
}

fn pick_domain(own: &Option<DomainConfig>, inherited: Option<&ConvexDomain>) -> Result<ConvexDomain, CliError> {
    match (own, inherited) {
        (Some(d), _) => d.build(),
        (None, Some(d)) => Ok(d.clone()),
        (None, None) => Err(CliError::Config("map needs a domain".into())),
    }
}

impl MapConfig {
    pub fn build(&self) -> Result<MapSpec, CliError> {
        self.build_in(None)
    }

    fn build_in(&self, inherited: Option<&ConvexDomain>) -> Result<MapSpec, CliError> {
        let spec = match self {
            MapConfig::AppendixA { alpha, eps0, safety } => {
                let profile = match eps0 {
                    Some(e) => EpsilonProfile::new(*alpha, *e),
                    None => EpsilonProfile::calibrated(*alpha, safety.unwrap_or(DEFAULT_SAFETY), DEFAULT_GRID),
                }
                .map_err(CliError::config)?;
                MapSpec::appendix_a(profile)
            }
            MapConfig::AppendixB { g } => {
                let profile = match g {
                    None => ScalarProfile::default(),
                    Some(ProfileConfig::AbsAffine { offset, slope }) => ScalarProfile::AbsAffine {
                        offset: *offset,
                        slope: *slope,
                    },
                    Some(ProfileConfig::PiecewiseLinear { knots }) => {
                        ScalarProfile::piecewise_linear(knots.iter().map(|k| (k[0], k[1])).collect())
                            .map_err(CliError::config)?
                    }
                };
                MapSpec::appendix_b(profile)
            }
            MapConfig::DiskProjection => catalog::disk_projection(),
            MapConfig::CoordClamp { intervals, domain } => {
                let iv = intervals
                    .as_ref()
                    .map(|v| v.iter().map(|p| (p[0], p[1])).collect())
                    .unwrap_or_else(|| catalog::CLAMP_BOX.to_vec());
                let dom = match (domain, inherited) {
                    (None, None) => ConvexDomain::cube(iv.len(), 1.0).map_err(CliError::config)?,
                    _ => pick_domain(domain, inherited)?,
                };
                MapSpec::coord_clamp(iv, dom)
            }
            MapConfig::EuclideanProjection { target, domain } => {
                let target = target.build()?;
                let dom = match (domain, inherited) {
                    (None, None) => ConvexDomain::cube(target.dim(), 1.0).map_err(CliError::config)?,
                    _ => pick_domain(domain, inherited)?,
                };
                MapSpec::euclidean_projection(target, dom)
            }
            MapConfig::Affine {
                matrix,
                offset,
                norm,
                domain,
            } => {
                let norm = norm.as_ref().map(NormConfig::build).transpose()?.unwrap_or(NormSpec::Euclidean);
                let affine = Affine::new(matrix.clone(), offset.clone(), norm).map_err(CliError::config)?;
                let dom = match (domain, inherited) {
                    (None, None) => ConvexDomain::cube(affine.dim(), 1.0).map_err(CliError::config)?,
                    _ => pick_domain(domain, inherited)?,
                };
                MapSpec::affine(affine, dom)
            }
            MapConfig::Identity { domain } => MapSpec::identity(pick_domain(domain, inherited)?),
            MapConfig::Constant { value, domain } => {
                let dom = match (domain, inherited) {
                    (None, None) => ConvexDomain::cube(value.len(), 1.0).map_err(CliError::config)?,
                    _ => pick_domain(domain, inherited)?,
                };
                MapSpec::constant(Vector::new(value.clone()), dom)
            }
            MapConfig::Composition { maps, domain } => {
                let dom = pick_domain(domain, inherited)?;
                let kinds = maps
                    .iter()
                    .map(|m| m.build_in(Some(&dom)).map(|s| s.kind().clone()))
                    .collect::<Result<Vec<_>, _>>()?;
                MapSpec::new(MapKind::Composition(kinds), dom)
            }
            MapConfig::ConvexCombination { maps, domain } => {
                let dom = pick_domain(domain, inherited)?;
                let parts = maps
                    .iter()
                    .map(|w| w.map.build_in(Some(&dom)).map(|s| (w.weight, s.kind().clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                MapSpec::new(MapKind::ConvexCombination(parts), dom)
            }
        };
        spec.map_err(CliError::config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Geometric { rho: f64, k_max: usize },
    LogSpaced { s_min: f64, s_max: f64, step: f64 },
    Explicit { values: Vec<f64> },
}

impl ScheduleConfig {
    pub fn build(&self) -> Result<LambdaSchedule, CliError> {
        match self {
            ScheduleConfig::Geometric { rho, k_max } => LambdaSchedule::geometric(*rho, *k_max),
            ScheduleConfig::LogSpaced { s_min, s_max, step } => LambdaSchedule::log_spaced(*s_min, *s_max, *step),
            ScheduleConfig::Explicit { values } => LambdaSchedule::explicit(values.clone()),
        }
        .map_err(CliError::config)
    }
}

/// Sample counts and tolerances of the diagnostics suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChecksConfig {
    pub monotone_pairs: usize,
    pub monotone_tol: f64,
    pub fix_samples: usize,
    pub fix_tol: f64,
    pub fix_max_iter: usize,
    pub midpoints: usize,
    pub vi_tol: f64,
    pub tail_fraction: f64,
    /// Largest tail diameter of `x_λ` accepted as convergence.
    pub convergence_tol: f64,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig {
            monotone_pairs: 10_000,
            monotone_tol: 1e-9,
            fix_samples: 1000,
            fix_tol: DEFAULT_FIX_TOL,
            fix_max_iter: 100_000,
            midpoints: 10_000,
            vi_tol: 1e-6,
            tail_fraction: 0.6,
            convergence_tol: 1e-6,
        }
    }
}

impl ChecksConfig {
    fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("monotone_tol", self.monotone_tol),
            ("fix_tol", self.fix_tol),
            ("vi_tol", self.vi_tol),
            ("convergence_tol", self.convergence_tol),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(CliError::Config(format!("checks.{name} must be finite and >= 0, got {v}")));
        }
        if self.fix_tol == 0.0 {
            return Err(CliError::Config("checks.fix_tol must be > 0".into()));
        }
        if self.fix_samples == 0 {
            return Err(CliError::Config("checks.fix_samples must be >= 1".into()));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(CliError::Config(format!(
                "checks.tail_fraction must lie in (0, 1], got {}",
                self.tail_fraction
            )));
        }
        Ok(())
    }
}

/// Anchor grid for `retract`: `counts[i]` nodes per axis spanning
/// `[lo, hi]`, which defaults to the domain's bounding box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetractConfig {
    pub counts: Vec<usize>,
    #[serde(default)]
    pub lo: Option<Vec<f64>>,
    #[serde(default)]
    pub hi: Option<Vec<f64>>,
    #[serde(default = "retract_tol")]
    pub lipschitz_tol: f64,
    #[serde(default = "retract_tol")]
    pub identity_tol: f64,
}

fn retract_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, svg: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub map: MapConfig,
    /// Defaults to the map's declared norm.
    #[serde(default)]
    pub norm: Option<NormConfig>,
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub anchor: Option<Vec<f64>>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Per-λ iteration cap; defaults to `ceil(60 / (1 - λ))`.
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub retract: Option<RetractConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub map: MapSpec,
    pub norm: NormSpec,
    pub schedule: LambdaSchedule,
    pub anchor: Vector,
    pub tol: f64,
    pub max_iter: Option<usize>,
    pub seed: u64,
    pub checks: ChecksConfig,
    pub retract: Option<RetractConfig>,
    pub svg: bool,
    pub out_dir: Option<PathBuf>,
}

impl Experiment {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            ..Default::default()
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn build(&self) -> Result<Experiment, CliError> {
        let map = self.map.build()?;
        let norm = match &self.norm {
            Some(n) => n.build()?,
            None => map.declared_norm(),
        };
        let schedule = self.schedule.build()?;
        let anchor = match &self.anchor {
            Some(a) => Vector::new(a.clone()),
            None => Vector::zeros(map.dim()),
        };
        if !anchor.is_finite() {
            return Err(CliError::Config("anchor must be finite".into()));
        }
        match map.domain().contains(&anchor) {
            Ok(true) => {}
            Ok(false) => return Err(CliError::Config(format!("anchor {anchor} is outside the domain"))),
            Err(e) => return Err(CliError::Config(format!("anchor: {e}"))),
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Config(format!("tol must be finite and > 0, got {}", self.tol)));
        }
        self.checks.validate()?;
        if let Some(r) = &self.retract {
            let d = map.dim();
            if r.counts.len() != d || r.counts.contains(&0) {
                return Err(CliError::Config(format!("retract.counts needs {d} positive entries")));
            }
            for (name, bound) in [("lo", &r.lo), ("hi", &r.hi)] {
                if let Some(b) = bound {
                    if b.len() != d || b.iter().any(|v| !v.is_finite()) {
                        return Err(CliError::Config(format!("retract.{name} needs {d} finite entries")));
                    }
                }
            }
        }
        Ok(Experiment {
            map,
            norm,
            schedule,
            anchor,
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            checks: self.checks.clone(),
            retract: self.retract.clone(),
            svg: self.output.svg,
            out_dir: self.output.dir.clone(),
        })
    }
}
