//! Experiment orchestration behind the `nonexp-fp` binary.
//!
//! Subcommands read a JSON [`ExperimentConfig`], solve, run diagnostics and
//! write artifacts into the output directory. Exit codes: 0 when every
//! applicable check behaves as expected, 1 on a failed check or solve
//! (artifacts written so far are kept), 2 on a configuration error.

pub mod config;
pub mod output;

use std::fmt::Display;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagnostics::{self, names, CheckReport};
use crate::geometry::{NormSpec, Vector};
use crate::maps::{catalog, MapSpec};
use crate::solver::{continuation_anchored, SolverError, Trajectory};

pub use config::{ExperimentConfig, Experiment};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const OUT_DIR_ENV: &str = "NONEXP_FP_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub(crate) fn config(e: impl Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nonexp-fp", version, about = "Fixed points of nonexpansive maps via lambda-contractions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (overrides the config and NONEXP_FP_OUT_DIR).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Write SVG plots.
    #[arg(long, global = true, overrides_with = "no_svg")]
    pub svg: bool,
    /// Do not write SVG plots.
    #[arg(long, global = true, overrides_with = "svg")]
    pub no_svg: bool,
    /// Seed for every sampled check (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve along the schedule and write the trajectory.
    Run { config: PathBuf },
    /// Run the full diagnostics suite.
    Check { config: PathBuf },
    /// Sample the retraction on an anchor grid.
    Retract { config: PathBuf },
    /// List the built-in maps with their manifests.
    Maps,
}

/// Command-line settings that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub svg: Option<bool>,
    pub seed: Option<u64>,
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            out_dir: self.out_dir.clone(),
            svg: if self.svg {
                Some(true)
            } else if self.no_svg {
                Some(false)
            } else {
                None
            },
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunArtifacts {
    pub trajectory_csv: Option<PathBuf>,
    pub retraction_csv: Option<PathBuf>,
    pub checks_json: Option<PathBuf>,
    pub svgs: Vec<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub artifacts: RunArtifacts,
    pub reports: Vec<CheckReport>,
    pub trajectory: Option<Trajectory>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().all(CheckReport::as_expected) {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }
}

/// Reads and validates a config file, applying command-line overrides.
pub fn load(path: &Path, ov: &Overrides) -> Result<Experiment, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut exp = ExperimentConfig::from_json(&text)?.build()?;
    if let Some(seed) = ov.seed {
        exp.seed = seed;
    }
    if let Some(svg) = ov.svg {
        exp.svg = svg;
    }
    Ok(exp)
}

/// `--out-dir`, then the config, then `NONEXP_FP_OUT_DIR`, then `./out`.
pub fn resolve_out_dir(exp: &Experiment, ov: &Overrides) -> PathBuf {
    ov.out_dir
        .clone()
        .or_else(|| exp.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<PathBuf, CliError> {
    output::write_atomic(&path, bytes).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn solve(exp: &Experiment) -> (Trajectory, Option<CheckReport>) {
    let opts = exp.solve_options();
    let empty = || Trajectory {
        map: exp.map.name().to_string(),
        norm: exp.norm,
        anchor: exp.anchor.clone(),
        tol: exp.tol,
        records: Vec::new(),
    };
    match continuation_anchored(&exp.map, &exp.schedule, &exp.anchor, &opts) {
        Ok(t) => (t.with_norm(exp.norm), None),
        Err(SolverError::Continuation {
            lambda,
            partial,
            source,
        }) => (
            partial.with_norm(exp.norm),
            Some(solve_failure(format!("lambda = {lambda}: {source}"))),
        ),
        Err(e) => (empty(), Some(solve_failure(e.to_string()))),
    }
}

fn solve_failure(note: String) -> CheckReport {
    CheckReport::new("solve", 1.0, 0.0, false).with_note(note)
}

fn write_trajectory(exp: &Experiment, traj: &Trajectory, dir: &Path, art: &mut RunArtifacts) -> Result<(), CliError> {
    let dim = exp.map.dim();
    let csv = output::trajectory_csv(traj, dim).map_err(|source| CliError::Io {
        path: dir.join("trajectory.csv"),
        source,
    })?;
    art.trajectory_csv = Some(write(dir.join("trajectory.csv"), &csv)?);
    if exp.svg && !traj.records.is_empty() {
        art.svgs.push(write(dir.join("coords.svg"), output::coords_svg(traj, dim).as_bytes())?);
        art.svgs.push(write(dir.join("norm.svg"), output::norm_svg(traj).as_bytes())?);
        if dim == 2 {
            art.svgs.push(write(dir.join("path.svg"), output::path_svg(traj).as_bytes())?);
        }
    }
    Ok(())
}

fn write_reports(path: PathBuf, reports: &[CheckReport], art: &mut RunArtifacts) -> Result<(), CliError> {
    let mut json = serde_json::to_vec_pretty(reports).map_err(|e| CliError::Io {
        path: path.clone(),
        source: io::Error::other(e),
    })?;
    json.push(b'\n');
    art.checks_json = Some(write(path, &json)?);
    Ok(())
}

/// Marks reports named in the map's manifest as expected to fail.
fn apply_manifest(map: &MapSpec, reports: &mut [CheckReport]) {
    let manifest = map.manifest();
    for r in reports {
        if manifest.expected_failures.contains(&r.name) {
            r.expected_pass = false;
            if r.note.is_empty() {
                r.note = manifest.note.clone();
            } else {
                r.note = format!("{}; expected to fail: {}", r.note, manifest.note);
            }
        }
    }
}

fn inapplicable(mut r: CheckReport, why: &str) -> CheckReport {
    r.applicable = false;
    r.note = if r.note.is_empty() {
        why.to_string()
    } else {
        format!("{}; {why}", r.note)
    };
    r
}

fn trajectory_reports(exp: &Experiment, traj: &Trajectory) -> Vec<CheckReport> {
    let mut out = vec![diagnostics::check_residuals(traj)];
    if let Ok(r) = diagnostics::check_convergence(traj, exp.checks.tail_fraction, exp.checks.convergence_tol) {
        out.push(r);
    }
    if exp.norm.is_euclidean() && exp.anchor.is_zero() {
        if let Ok(r) = diagnostics::check_norm_monotone(traj) {
            out.push(if exp.map.nonexpansive_under(&NormSpec::Euclidean) {
                r
            } else {
                inapplicable(r, "map is not certified 1-Lipschitz in the euclidean norm")
            });
        }
    }
    out
}

/// Solves along the schedule and writes the trajectory with its basic checks.
pub fn run(exp: &Experiment, dir: &Path) -> Result<Outcome, CliError> {
    let (traj, failure) = solve(exp);
    let mut art = RunArtifacts::default();
    write_trajectory(exp, &traj, dir, &mut art)?;
    let mut reports: Vec<CheckReport> = failure.into_iter().collect();
    reports.extend(trajectory_reports(exp, &traj));
    apply_manifest(&exp.map, &mut reports);
    write_reports(dir.join("checks.json"), &reports, &mut art)?;
    Ok(Outcome {
        artifacts: art,
        reports,
        trajectory: Some(traj),
    })
}

/// The full diagnostics suite for the configured map, norm and anchor.
pub fn suite(exp: &Experiment, traj: &Trajectory) -> Vec<CheckReport> {
    let c = &exp.checks;
    let map = &exp.map;
    let seed = exp.seed;
    let mut reports = trajectory_reports(exp, traj);

    let euclid_ok = map.nonexpansive_under(&NormSpec::Euclidean);
    let mono = diagnostics::check_monotone(map, c.monotone_pairs, seed, c.monotone_tol);
    reports.push(if euclid_ok {
        mono
    } else {
        inapplicable(mono, "map is not certified 1-Lipschitz in the euclidean norm")
    });

    let norm_ok = map.nonexpansive_under(&exp.norm);
    let not_lipschitz = format!("map is not certified 1-Lipschitz in the {} norm", exp.norm);
    if exp.norm.smooth() {
        if let Ok(r) = diagnostics::check_duality_monotone(map, &exp.norm, c.monotone_pairs, seed, c.monotone_tol) {
            reports.push(if norm_ok { r } else { inapplicable(r, &not_lipschitz) });
        }
    }

    let mut fix = match diagnostics::sample_fixed_points(map, c.fix_samples, seed, c.fix_tol, c.fix_max_iter) {
        Ok(f) => f,
        Err(e) => {
            reports.push(CheckReport::new("fix_sample", 0.0, 1.0, false).with_note(e.to_string()));
            return reports;
        }
    };
    reports.push(diagnostics::convexity_probe(&fix, map, c.midpoints, seed, c.fix_tol));
    // the limit itself is rarely drawn by the sampler
    if let Some(last) = traj.last() {
        fix.insert_refined(map, &last.y_lambda, c.fix_max_iter);
    }

    if exp.norm.smooth() {
        if let Some(last) = traj.last() {
            if let Ok(r) = diagnostics::check_variational_limit(&last.y_lambda, &fix, &exp.norm, &exp.anchor, c.vi_tol) {
                reports.push(if norm_ok { r } else { inapplicable(r, &not_lipschitz) });
            }
        }
        if let Ok(r) = diagnostics::uniqueness_probe(&fix, &exp.norm, &exp.anchor, c.vi_tol) {
            reports.push(if norm_ok { r } else { inapplicable(r, &not_lipschitz) });
        }
    }
    reports
}

/// Solves, runs [`suite`] and writes the trajectory and the JSON report.
pub fn check(exp: &Experiment, dir: &Path) -> Result<Outcome, CliError> {
    let (traj, failure) = solve(exp);
    let mut art = RunArtifacts::default();
    write_trajectory(exp, &traj, dir, &mut art)?;
    let mut reports: Vec<CheckReport> = failure.into_iter().collect();
    reports.extend(suite(exp, &traj));
    apply_manifest(&exp.map, &mut reports);
    write_reports(dir.join("checks.json"), &reports, &mut art)?;
    Ok(Outcome {
        artifacts: art,
        reports,
        trajectory: Some(traj),
    })
}

/// Grid nodes inside the domain, first axis varying slowest.
pub fn anchor_grid(map: &MapSpec, counts: &[usize], lo: &[f64], hi: &[f64]) -> Vec<Vector> {
    let axes: Vec<Vec<f64>> = counts
        .iter()
        .zip(lo.iter().zip(hi))
        .map(|(&n, (&a, &b))| {
            if n == 1 {
                vec![0.5 * (a + b)]
            } else {
                (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
            }
        })
        .collect();
    let total: usize = counts.iter().product();
    let mut out = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut coords = vec![0.0; axes.len()];
        for (d, axis) in axes.iter().enumerate().rev() {
            coords[d] = axis[k % axis.len()];
            k /= axis.len();
        }
        let p = Vector::new(coords);
        if map.domain().contains(&p).unwrap_or(false) {
            out.push(p);
        }
    }
    out
}

fn retraction_reports(exp: &Experiment, pairs: &[(Vector, Vector)], fix_tol: f64) -> Vec<CheckReport> {
    let r = exp.retract.as_ref().expect("checked by caller");
    let norm = exp.norm;
    let n = pairs.len();
    let ratios: Vec<(f64, usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0, i, i);
            for j in i + 1..n {
                let da = norm.value(&(&pairs[i].0 - &pairs[j].0));
                if da == 0.0 {
                    continue;
                }
                let q = norm.value(&(&pairs[i].1 - &pairs[j].1)) / da;
                if q > best.0 {
                    best = (q, i, j);
                }
            }
            best
        })
        .collect();
    let worst = ratios
        .iter()
        .fold((0.0, 0, 0), |acc, &x| if x.0 > acc.0 { x } else { acc });
    let bound = 1.0 + r.lipschitz_tol;
    let mut lip = CheckReport::new(names::RETRACTION_LIPSCHITZ, worst.0, bound, worst.0 <= bound)
        .with_samples(n * n.saturating_sub(1) / 2, None)
        .with_note(format!("pairwise ratios in the {norm} norm"));
    if n >= 2 {
        lip = lip.with_witness(vec![pairs[worst.1].0.clone(), pairs[worst.2].0.clone()]);
    }
    if !exp.map.nonexpansive_under(&norm) {
        lip = inapplicable(lip, &format!("map is not certified 1-Lipschitz in the {norm} norm"));
    }

    let fixed: Vec<&(Vector, Vector)> = pairs
        .iter()
        .filter(|(a, _)| exp.map.eval_unchecked(a).distance(a) <= fix_tol)
        .collect();
    let dists: Vec<f64> = fixed.iter().map(|(a, y)| a.distance(y)).collect();
    let ident = match diagnostics::first_extreme(&dists, false) {
        Some(k) => CheckReport::new(names::RETRACTION_IDENTITY, dists[k], r.identity_tol, dists[k] <= r.identity_tol)
            .with_witness(vec![fixed[k].0.clone(), fixed[k].1.clone()]),
        None => CheckReport::new(names::RETRACTION_IDENTITY, 0.0, r.identity_tol, true)
            .with_note("no grid anchor is a fixed point"),
    };
    vec![lip, ident.with_samples(fixed.len(), None)]
}

/// Solves the anchored continuation from every grid anchor inside the
/// domain and writes `retraction.csv` and `retraction_checks.json`.
pub fn retract(exp: &Experiment, dir: &Path) -> Result<Outcome, CliError> {
    let Some(r) = &exp.retract else {
        return Err(CliError::Config("retract needs a \"retract\" section with per-axis counts".into()));
    };
    let (blo, bhi) = exp.map.domain().bounding_box();
    let lo = r.lo.clone().unwrap_or_else(|| blo.coords().to_vec());
    let hi = r.hi.clone().unwrap_or_else(|| bhi.coords().to_vec());
    let anchors = anchor_grid(&exp.map, &r.counts, &lo, &hi);
    let opts = exp.solve_options();
    let results: Vec<Result<Vector, String>> = anchors
        .par_iter()
        .map(|a| {
            continuation_anchored(&exp.map, &exp.schedule, a, &opts)
                .map(|t| t.records.last().expect("schedule is nonempty").y_lambda.clone())
                .map_err(|e| format!("anchor {a}: {e}"))
        })
        .collect();
    let mut pairs = Vec::with_capacity(anchors.len());
    let mut reports = Vec::new();
    for (a, res) in anchors.iter().zip(results) {
        match res {
            Ok(y) => pairs.push((a.clone(), y)),
            Err(e) => reports.push(solve_failure(e)),
        }
    }
    let mut art = RunArtifacts::default();
    let csv = output::retraction_csv(&pairs, exp.map.dim()).map_err(|source| CliError::Io {
        path: dir.join("retraction.csv"),
        source,
    })?;
    art.retraction_csv = Some(write(dir.join("retraction.csv"), &csv)?);
    reports.extend(retraction_reports(exp, &pairs, exp.checks.fix_tol));
    apply_manifest(&exp.map, &mut reports);
    write_reports(dir.join("retraction_checks.json"), &reports, &mut art)?;
    Ok(Outcome {
        artifacts: art,
        reports,
        trajectory: None,
    })
}

#[derive(Debug, Serialize)]
struct MapEntry {
    name: String,
    dim: usize,
    declared_norm: String,
    expected_failures: Vec<String>,
    note: String,
}

/// JSON listing of the built-in maps and their manifests.
pub fn maps_listing() -> Result<String, CliError> {
    let maps = catalog::builtins().map_err(CliError::config)?;
    let entries: Vec<MapEntry> = maps
        .iter()
        .map(|m| {
            let manifest = m.manifest();
            MapEntry {
                name: m.name().to_string(),
                dim: m.dim(),
                declared_norm: m.declared_norm().to_string(),
                expected_failures: manifest.expected_failures,
                note: manifest.note,
            }
        })
        .collect();
    serde_json::to_string_pretty(&entries).map_err(CliError::config)
}

fn print_outcome(outcome: &Outcome) {
    for r in &outcome.reports {
        let status = match (r.applicable, r.pass, r.expected_pass) {
            (false, _, _) => "SKIP",
            (true, true, true) => "PASS",
            (true, false, false) => "XFAIL",
            (true, true, false) => "XPASS",
            (true, false, true) => "FAIL",
        };
        println!(
            "{status:5} {:22} worst={:.6e} bound={:.6e} {}",
            r.name, r.worst_value, r.bound, r.note
        );
    }
    let a = &outcome.artifacts;
    for p in a.trajectory_csv.iter().chain(&a.retraction_csv).chain(&a.checks_json).chain(&a.svgs) {
        println!("wrote {}", p.display());
    }
}

type CommandFn = fn(&Experiment, &Path) -> Result<Outcome, CliError>;

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let ov = cli.overrides();
    let (path, which): (&Path, CommandFn) = match &cli.command {
        Command::Maps => {
            return match maps_listing() {
                Ok(s) => {
                    println!("{s}");
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Run { config } => (config, run),
        Command::Check { config } => (config, check),
        Command::Retract { config } => (config, retract),
    };
    let result = load(path, &ov).and_then(|exp| {
        let dir = resolve_out_dir(&exp, &ov);
        which(&exp, &dir)
    });
    match result {
        Ok(outcome) => {
            print_outcome(&outcome);
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and executes; usage errors exit 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}
