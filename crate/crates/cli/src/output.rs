//! CSV and text artifacts.
//!
//! Numbers are written with the shortest representation that round-trips, so
//! identical runs give byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use quasispec::analysis::{ConvergenceReport, JnSample};
use quasispec::timeint::MonitorSeries;
use quasispec::{EvolveResult, EvolveStatus, StateField};

use crate::CliError;

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// `E0`, `E1`, `E1.5`, ...
pub fn norm_label(prefix: &str, s: f64) -> String {
    format!("{prefix}{s}")
}

pub fn status_text(status: &EvolveStatus) -> String {
    match status {
        EvolveStatus::Completed => "completed".into(),
        EvolveStatus::BlowUp { time } => format!("blow-up at t={time}"),
    }
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

/// `time,<monitor labels>`.
pub fn write_monitors(path: &Path, series: &MonitorSeries) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let mut header = vec!["time".to_string()];
    header.extend(series.labels.iter().cloned());
    w.write_record(&header).map_err(csv_err(path))?;
    for (t, row) in series.times.iter().zip(&series.rows) {
        let mut rec = vec![num(*t)];
        rec.extend(row.iter().map(|v| num(*v)));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Modes in increasing order, then `re_<var>,im_<var>` per component.
pub fn write_spectrum(path: &Path, state: &StateField, vars: &[String]) -> Result<(), CliError> {
    let grid = state.grid();
    let dim = grid.dim();
    let mut w = writer(path)?;
    let mut header: Vec<String> = if dim == 1 { vec!["k".into()] } else { vec!["kx".into(), "ky".into()] };
    for v in vars {
        header.push(format!("re_{v}"));
        header.push(format!("im_{v}"));
    }
    w.write_record(&header).map_err(csv_err(path))?;
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by_key(|&i| grid.mode(i));
    for i in order {
        let k = grid.mode(i);
        let mut rec: Vec<String> = k[..dim].iter().map(|k| k.to_string()).collect();
        for c in state.components() {
            let z = c.coeffs()[i];
            rec.push(num(z.re));
            rec.push(num(z.im));
        }
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Physical samples: `x,<vars>` in 1D, `x,y,<vars>` in 2D.
pub fn write_snapshot(path: &Path, state: &StateField, vars: &[String]) -> Result<(), CliError> {
    let grid = state.grid();
    let pts = grid.points();
    let samples: Vec<Vec<f64>> = state.components().iter().map(|c| c.to_samples()).collect();
    let mut w = writer(path)?;
    let mut header: Vec<String> = if grid.dim() == 1 { vec!["x".into()] } else { vec!["x".into(), "y".into()] };
    header.extend(vars.iter().cloned());
    w.write_record(&header).map_err(csv_err(path))?;
    for i in 0..grid.len() {
        let mut rec = if grid.dim() == 1 {
            vec![num(pts[i])]
        } else {
            let n = grid.points_per_axis();
            vec![num(pts[i / n]), num(pts[i % n])]
        };
        rec.extend(samples.iter().map(|s| num(s[i])));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// `key = value` lines describing a finished run.
pub fn run_summary(scheme: &str, two_m: usize, dt: f64, result: &EvolveResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scheme = {scheme}");
    let _ = writeln!(s, "two_M = {two_m}");
    let _ = writeln!(s, "dt = {dt}");
    let _ = writeln!(s, "steps = {}", result.steps);
    let _ = writeln!(s, "final_time = {}", result.final_time);
    match result.status {
        EvolveStatus::Completed => {
            let _ = writeln!(s, "status = completed");
        }
        EvolveStatus::BlowUp { time } => {
            let _ = writeln!(s, "status = blow-up");
            let _ = writeln!(s, "blowup_time = {time}");
        }
    }
    s
}

/// `two_M,scheme,E<s>...,EOC<s>...,status`.
pub fn write_report(path: &Path, report: &ConvergenceReport) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let mut header = vec!["two_M".to_string(), "scheme".to_string()];
    header.extend(report.norms.iter().map(|s| norm_label("E", *s)));
    header.extend(report.norms.iter().map(|s| norm_label("EOC", *s)));
    header.push("status".into());
    w.write_record(&header).map_err(csv_err(path))?;
    for r in &report.rows {
        let mut rec = vec![(2 * r.half).to_string(), r.scheme.name().to_string()];
        rec.extend(r.errors.iter().map(|e| opt(*e)));
        rec.extend(r.eocs.iter().map(|e| opt(*e)));
        rec.push(status_text(&r.status));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Aligned table with one block of columns per scheme.
pub fn report_table(report: &ConvergenceReport) -> String {
    let mut schemes = Vec::new();
    for r in &report.rows {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
    }
    let mut halves: Vec<usize> = report.rows.iter().map(|r| r.half).collect();
    halves.dedup();

    let cell = |v: Option<f64>, eoc: bool| match v {
        Some(x) if eoc => format!("{x:.2}"),
        Some(x) => format!("{x:.3e}"),
        None => "-".into(),
    };
    let mut header = vec!["2M".to_string()];
    for sc in &schemes {
        for s in &report.norms {
            header.push(format!("{} E{s}", sc.name()));
            header.push(format!("{} EOC{s}", sc.name()));
        }
    }
    let mut lines = vec![header];
    for &h in &halves {
        let mut line = vec![(2 * h).to_string()];
        for sc in &schemes {
            let row = report.rows.iter().find(|r| r.half == h && r.scheme == *sc);
            for i in 0..report.norms.len() {
                line.push(row.map_or("-".into(), |r| cell(r.errors[i], false)));
                line.push(row.map_or("-".into(), |r| cell(r.eocs[i], true)));
            }
        }
        lines.push(line);
    }
    let widths: Vec<usize> = (0..lines[0].len()).map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0)).collect();
    let mut out = format!("# {}\n", report.reference);
    for l in &lines {
        let cells: Vec<String> = l.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    for r in report.rows.iter().filter(|r| r.status.is_blow_up()) {
        let _ = writeln!(out, "# 2M = {} {}: {}", 2 * r.half, r.scheme.name(), status_text(&r.status));
    }
    out
}

/// `N,J_N,remainder`.
pub fn write_jn(path: &Path, samples: &[JnSample]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["N", "J_N", "remainder"]).map_err(csv_err(path))?;
    for s in samples {
        w.write_record([s.n.to_string(), num(s.value), num(s.remainder)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
