//! Result files: per-repetition and summary CSVs, sweep curves and SVG plots.
//! Floats use Rust's shortest round-trip formatting so reruns are
//! byte-identical.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use driftloc_core::baselines::LocalTestResult;
use driftloc_core::eval::{CurvePoint, ResultTable, Summary};

use crate::error::{CliError, CliResult};

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `rep,auc,n_evaluated,n_excluded`, then rows keyed `mean`, `median`,
/// `q25` and `q75` carrying the summary in the `auc` column. Undefined
/// AUCs are empty fields.
pub fn write_results_csv<W: Write>(out: &mut W, table: &ResultTable) -> io::Result<()> {
    writeln!(out, "rep,auc,n_evaluated,n_excluded")?;
    for r in &table.rows {
        writeln!(out, "{},{},{},{}", r.rep, opt(r.auc), r.n_evaluated, r.n_excluded)?;
    }
    let s = table.summary();
    for (key, f) in [
        ("mean", s.map(|s| s.mean)),
        ("median", s.map(|s| s.median)),
        ("q25", s.map(|s| s.q25)),
        ("q75", s.map(|s| s.q75)),
    ] {
        writeln!(out, "{key},{},,", opt(f))?;
    }
    Ok(())
}

/// One row per method: `method,mean,median,q25,q75,n_reps,n_defined`.
pub fn write_summary_csv<W: Write>(out: &mut W, tables: &[(String, ResultTable)]) -> io::Result<()> {
    writeln!(out, "method,mean,median,q25,q75,n_reps,n_defined")?;
    for (label, table) in tables {
        let s = table.summary();
        writeln!(
            out,
            "{label},{},{},{},{},{},{}",
            opt(s.map(|s| s.mean)),
            opt(s.map(|s| s.median)),
            opt(s.map(|s| s.q25)),
            opt(s.map(|s| s.q75)),
            table.rows.len(),
            table.aucs().len()
        )?;
    }
    Ok(())
}

pub fn write_curve_csv<W: Write>(out: &mut W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(out, "grid_value,median_auc,q25,q75")?;
    for p in points {
        let s = p.summary;
        writeln!(
            out,
            "{},{},{},{}",
            p.grid_value,
            opt(s.map(|s| s.median)),
            opt(s.map(|s| s.q25)),
            opt(s.map(|s| s.q75))
        )?;
    }
    Ok(())
}

/// `index,p_or_score,assigned` with `assigned` as 0/1.
pub fn write_localization_csv<W: Write>(out: &mut W, result: &LocalTestResult) -> io::Result<()> {
    writeln!(out, "index,p_or_score,assigned")?;
    for (i, (v, a)) in result.values.iter().zip(&result.assigned).enumerate() {
        writeln!(out, "{i},{v},{}", u8::from(*a))?;
    }
    Ok(())
}

/// Renders into memory, then writes the file in one go.
pub fn write_file(path: &Path, render: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> CliResult<()> {
    let mut buf = Vec::new();
    render(&mut buf).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    std::fs::write(path, buf).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 60.0;

/// Maps an AUC in [0, 1] to a y coordinate.
fn y_of(v: f64) -> f64 {
    TOP + (1.0 - v.clamp(0.0, 1.0)) * (H - TOP - BOTTOM)
}

fn frame(svg: &mut String, x_label: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = y_of(tick);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{tick}</text>"##,
            W - RIGHT,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">ROC-AUC</text>"#,
        H / 2.0,
        H / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        escape(x_label)
    );
}

/// Box plot of per-repetition AUCs: quartile box, median bar, min–max whiskers.
pub fn boxplot_svg(groups: &[(String, Vec<f64>)]) -> String {
    let mut svg = String::new();
    frame(&mut svg, "method");
    let slot = (W - LEFT - RIGHT) / groups.len().max(1) as f64;
    for (g, (label, values)) in groups.iter().enumerate() {
        let cx = LEFT + slot * (g as f64 + 0.5);
        let half = (slot * 0.3).min(40.0);
        if let Some(s) = Summary::of(values) {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let _ = writeln!(
                svg,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
                y_of(hi),
                y_of(lo)
            );
            let _ = writeln!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="black"/>"##,
                cx - half,
                y_of(s.q75),
                2.0 * half,
                y_of(s.q25) - y_of(s.q75)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
                cx - half,
                y_of(s.median),
                cx + half,
                y_of(s.median)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            H - BOTTOM + 16.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Median AUC against the grid value with a shaded interquartile band.
pub fn curve_svg(points: &[CurvePoint], x_label: &str) -> String {
    let mut svg = String::new();
    frame(&mut svg, x_label);
    let defined: Vec<(f64, Summary)> = points.iter().filter_map(|p| p.summary.map(|s| (p.grid_value, s))).collect();
    let lo = points.iter().map(|p| p.grid_value).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.grid_value).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x_of = |v: f64| {
        if hi > lo {
            LEFT + (v - lo) / span * (W - LEFT - RIGHT)
        } else {
            (LEFT + W - RIGHT) / 2.0
        }
    };
    for p in points {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x_of(p.grid_value),
            H - BOTTOM + 16.0,
            p.grid_value
        );
    }
    if !defined.is_empty() {
        let upper = defined.iter().map(|(g, s)| format!("{:.2},{:.2}", x_of(*g), y_of(s.q75)));
        let lower = defined.iter().rev().map(|(g, s)| format!("{:.2},{:.2}", x_of(*g), y_of(s.q25)));
        let band: Vec<String> = upper.chain(lower).collect();
        let _ = writeln!(svg, r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.5"/>"##, band.join(" "));
        let line: Vec<String> = defined.iter().map(|(g, s)| format!("{:.2},{:.2}", x_of(*g), y_of(s.median))).collect();
        let _ =
            writeln!(svg, r##"<polyline points="{}" fill="none" stroke="#08519c" stroke-width="2"/>"##, line.join(" "));
        for (g, s) in &defined {
            let _ =
                writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#08519c"/>"##, x_of(*g), y_of(s.median));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
