//! Artifact writers: CSV tables, SVG polylines and atomic file replacement.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::geometry::Vector;
use crate::solver::Trajectory;

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_bytes(header: Vec<String>, rows: Vec<Vec<String>>) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(io::Error::other)?;
    for row in rows {
        w.write_record(&row).map_err(io::Error::other)?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}_{i}"))
}

/// `lambda,iters,residual,norm_y,y_1..y_n,x_1..x_n`, one row per solved λ.
pub fn trajectory_csv(traj: &Trajectory, dim: usize) -> io::Result<Vec<u8>> {
    let header = ["lambda", "iters", "residual", "norm_y"]
        .into_iter()
        .map(String::from)
        .chain(indexed("y", dim))
        .chain(indexed("x", dim))
        .collect();
    let rows = traj
        .records
        .iter()
        .map(|r| {
            let mut row = vec![
                fmt_f64(r.lambda),
                r.iterations.to_string(),
                fmt_f64(r.residual),
                fmt_f64(traj.norm.value(&r.y_lambda)),
            ];
            row.extend(r.y_lambda.coords().iter().map(|&v| fmt_f64(v)));
            row.extend(r.x_lambda.coords().iter().map(|&v| fmt_f64(v)));
            row
        })
        .collect();
    csv_bytes(header, rows)
}

/// `a_1..a_n,y_1..y_n`, one row per anchor.
pub fn retraction_csv(pairs: &[(Vector, Vector)], dim: usize) -> io::Result<Vec<u8>> {
    let header = indexed("a", dim).chain(indexed("y", dim)).collect();
    let rows = pairs
        .iter()
        .map(|(a, y)| a.coords().iter().chain(y.coords()).map(|&v| fmt_f64(v)).collect())
        .collect();
    csv_bytes(header, rows)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

/// Self-contained SVG with one polyline per series and the data ranges
/// printed on the axes.
pub fn polyline_svg(title: &str, x_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let (x0, x1) = span(series.iter().flat_map(|s| s.1.iter().map(|p| p.0)));
    let (y0, y1) = span(series.iter().flat_map(|s| s.1.iter().map(|p| p.1)));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}">{x0:.4}</text>"#, HEIGHT - MARGIN + 14.0);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{x1:.4}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0
    );
    let _ = writeln!(s, r#"<text x="4" y="{}">{y0:.4}</text>"#, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<text x="4" y="{}">{y1:.4}</text>"#, MARGIN + 4.0);
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 4.0,
            MARGIN + 14.0 * (k as f64 + 1.0),
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Coordinates of `y_λ` against λ.
pub fn coords_svg(traj: &Trajectory, dim: usize) -> String {
    let series: Vec<_> = (0..dim)
        .map(|i| {
            let pts = traj.records.iter().map(|r| (r.lambda, r.y_lambda[i])).collect();
            (format!("y_{}", i + 1), pts)
        })
        .collect();
    polyline_svg(&format!("{}: coordinates of y_lambda", traj.map), "lambda", &series)
}

/// `‖y_λ‖` in the experiment norm against λ.
pub fn norm_svg(traj: &Trajectory) -> String {
    let pts = traj
        .records
        .iter()
        .map(|r| (r.lambda, traj.norm.value(&r.y_lambda)))
        .collect();
    polyline_svg(
        &format!("{}: {} norm of y_lambda", traj.map, traj.norm),
        "lambda",
        &[(format!("|y|_{}", traj.norm), pts)],
    )
}

/// The planar path of `y_λ`; only meaningful in dimension 2.
pub fn path_svg(traj: &Trajectory) -> String {
    let pts = traj.records.iter().map(|r| (r.y_lambda[0], r.y_lambda[1])).collect();
    polyline_svg(&format!("{}: path of y_lambda", traj.map), "y_1", &[("y".to_string(), pts)])
}
