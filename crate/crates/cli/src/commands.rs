//! Subcommand implementations. Each returns the text to print and writes its
//! artifacts below the configured output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use quasispec::analysis::{
    assemble_report, jn_probe_1d, least_squares_slope, run_reference, run_row, ConvergenceReport, InitialData,
    JnSample, StudySpec,
};
use quasispec::systems::{
    builtin, check_compatibility_variant, check_factorization, check_polynomial, check_symmetrizer_variant,
    domain_samples, CheckReport, Failure, SampleBox, Violation, BUILTIN_SYSTEMS,
};
use quasispec::{EnergyVariant, EvolveConfig, EvolveStatus, Grid, Monitor, SchemeKind, SchemeSpec, SystemDef};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::output;
use crate::presets::PRESETS;
use crate::sysfile::parse_system;
use crate::CliError;

/// Built-in system name or path to a definition file.
pub fn resolve_system(spec: &str, cfg: Option<&ExperimentConfig>) -> Result<SystemDef, CliError> {
    if let Some(sys) = builtin(spec) {
        return Ok(sys);
    }
    let path = cfg.map_or_else(|| PathBuf::from(spec), |c| c.resolve_path(spec));
    let text = fs::read_to_string(&path).map_err(|e| {
        CliError::Config(format!(
            "`{spec}` is neither a built-in system ({}) nor a readable file: {e}",
            BUILTIN_SYSTEMS.join(", ")
        ))
    })?;
    parse_system(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn require<T: Clone>(v: &Option<T>, key: &str, command: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Config(format!("`{command}` needs `{key}` (config key or flag)")))
}

fn parse_schemes(cfg: &ExperimentConfig) -> Result<Vec<SchemeKind>, CliError> {
    cfg.schemes()
        .iter()
        .map(|s| {
            SchemeKind::from_name(s).ok_or_else(|| {
                let names: Vec<&str> = SchemeKind::ALL.iter().map(|k| k.name()).collect();
                CliError::Config(format!("unknown scheme `{s}` (available: {})", names.join(", ")))
            })
        })
        .collect()
}

fn initial_data(cfg: &ExperimentConfig, command: &str) -> Result<InitialData, CliError> {
    let name = require(&cfg.initial, "initial", command)?;
    InitialData::from_name(&name, &cfg.params_list()).map_err(|e| match e {
        quasispec::Error::UnknownInitialData { name } => {
            CliError::Config(format!("unknown initial data `{name}` (catalog: {})", InitialData::catalog().join(", ")))
        }
        other => other.into(),
    })
}

fn default_dt(dim: usize) -> f64 {
    if dim == 1 {
        1e-4
    } else {
        1e-3
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Monitors written by `run`: Sobolev norms, margins, Hamiltonian, `max |∂²_x u|`.
pub fn run_monitors(sys: &SystemDef, norms: &[f64]) -> Vec<Monitor> {
    let mut out: Vec<Monitor> = norms.iter().map(|&s| Monitor::Sobolev(s)).collect();
    out.extend(sys.predicates().iter().map(|p| Monitor::Margin(p.name.clone())));
    if sys.is_shallow_water_shaped() {
        out.push(Monitor::Hamiltonian);
        out.push(Monitor::MaxSecondDerivative { component: 1, axis: 0 });
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub scheme: SchemeKind,
    pub status: EvolveStatus,
    pub dir: PathBuf,
}

/// Single evolution per scheme; artifacts go to `output` (or `output/<scheme>`
/// when several schemes are requested).
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<(Vec<RunSummary>, String), CliError> {
    let sys = resolve_system(&require(&cfg.system, "system", "run")?, Some(cfg))?;
    let schemes = parse_schemes(cfg)?;
    let initial = initial_data(cfg, "run")?;
    let half = require(&cfg.m, "M", "run")?;
    let dt = cfg.dt.unwrap_or_else(|| default_dt(sys.dim()));
    let t_final = cfg.t.unwrap_or(0.1);
    let norms = cfg.norms();
    if initial.dim() != sys.dim() {
        return Err(CliError::Config(format!(
            "initial data `{}` is {}-dimensional but system `{}` is {}-dimensional",
            initial.name(),
            initial.dim(),
            sys.name(),
            sys.dim()
        )));
    }
    if initial.dim() + 1 != sys.size() {
        return Err(CliError::Config(format!(
            "initial data `{}` provides {} components, system `{}` has {}",
            initial.name(),
            initial.dim() + 1,
            sys.name(),
            sys.size()
        )));
    }
    let grid = Grid::new(sys.dim(), half)?;
    let u0 = initial.initial_state(&grid)?;
    let evolve_cfg = EvolveConfig::new(dt, t_final).with_monitors(run_monitors(&sys, &norms));

    let root = cfg.output_dir();
    let mut summaries = Vec::new();
    let mut text = String::new();
    for scheme in schemes {
        let dir = if cfg.schemes().len() > 1 { root.join(scheme.name()) } else { root.clone() };
        create_dir(&dir)?;
        let result = quasispec::timeint::evolve(&SchemeSpec::new(scheme), &sys, &u0, &evolve_cfg)?;
        output::write_monitors(&dir.join("monitors.csv"), &result.monitors)?;
        output::write_spectrum(&dir.join("spectrum.csv"), &result.final_state, sys.var_names())?;
        output::write_snapshot(&dir.join("snapshot.csv"), &result.final_state, sys.var_names())?;
        write_text(&dir.join("summary.txt"), &output::run_summary(scheme.name(), 2 * half, dt, &result))?;
        let _ = writeln!(
            text,
            "{:<10} 2M = {:<5} {} (t = {}, {} steps) -> {}",
            scheme.name(),
            2 * half,
            output::status_text(&result.status),
            result.final_time,
            result.steps,
            dir.display()
        );
        summaries.push(RunSummary { scheme, status: result.status, dir });
    }
    Ok((summaries, text))
}

pub fn study_spec(cfg: &ExperimentConfig) -> Result<StudySpec, CliError> {
    let system = resolve_system(&require(&cfg.system, "system", "converge")?, Some(cfg))?;
    let dt = cfg.dt.unwrap_or_else(|| default_dt(system.dim()));
    let spec = StudySpec {
        schemes: parse_schemes(cfg)?,
        initial: initial_data(cfg, "converge")?,
        halves: cfg
            .m_list
            .clone()
            .or(cfg.m.map(|m| vec![m]))
            .ok_or_else(|| CliError::Config("`converge` needs `M_list` (config key) or `--M`".into()))?,
        reference_half: require(&cfg.m_ref, "M_ref", "converge")?,
        dt,
        t_final: cfg.t.unwrap_or(0.1),
        norms: cfg.norms(),
        system,
    };
    spec.validate()?;
    Ok(spec)
}

/// Convergence study with rows spread over `jobs` worker threads.
pub fn cmd_converge(cfg: &ExperimentConfig, jobs: usize) -> Result<(ConvergenceReport, String), CliError> {
    let spec = study_spec(cfg)?;
    let reference = run_reference(&spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes = pool.install(|| {
        spec.jobs().into_par_iter().map(|job| run_row(&spec, &reference, job)).collect::<Result<Vec<_>, _>>()
    })?;
    let report = assemble_report(&spec, outcomes);
    let dir = cfg.output_dir();
    create_dir(&dir)?;
    output::write_report(&dir.join("report.csv"), &report)?;
    let table = output::report_table(&report);
    write_text(&dir.join("table.txt"), &table)?;
    Ok((report, table))
}

fn describe(f: &Failure, names: &[String]) -> String {
    let at = if f.point.is_empty() {
        String::new()
    } else {
        let coords: Vec<String> = names.iter().zip(&f.point).map(|(n, v)| format!("{n} = {v:.4}")).collect();
        format!(" at ({})", coords.join(", "))
    };
    let what = match &f.violation {
        Violation::SymmetrizerAsymmetric { variant, asymmetry } => {
            format!("{} symmetrizer not symmetric ({asymmetry:.2e})", variant.as_str())
        }
        Violation::NotPositiveDefinite { variant, min_eigenvalue } => {
            format!("{} symmetrizer not positive definite (min eigenvalue {min_eigenvalue:.4})", variant.as_str())
        }
        Violation::ProductAsymmetric { variant, axis, asymmetry } => {
            format!("S A_{} not symmetric for the {} symmetrizer ({asymmetry:.2e})", axis + 1, variant.as_str())
        }
        Violation::Compatibility { variant, condition, axis, asymmetry } => format!(
            "compatibility condition {condition} fails on axis {} for the {} symmetrizer ({asymmetry:.2e})",
            axis + 1,
            variant.as_str()
        ),
        Violation::FactorAsymmetric { axis } => format!("S_{}^0 is not symmetric", axis + 1),
        Violation::FactorizationMismatch { axis, max_coefficient } => {
            format!("A_{} - S_{}^0 S(U) has a coefficient {max_coefficient:.2e}", axis + 1, axis + 1)
        }
    };
    format!("{what}{at}")
}

fn report_lines(out: &mut String, report: &CheckReport, what: &str, names: &[String]) {
    let verdict = if report.passed() { "pass" } else { "FAIL" };
    let _ = writeln!(out, "{:<4} {verdict}  {what}", report.assumption);
    for f in report.failures.iter().take(5) {
        let _ = writeln!(out, "       {}", describe(f, names));
    }
    if report.failures.len() > 5 {
        let _ = writeln!(out, "       ... {} more", report.failures.len() - 5);
    }
}

/// Default sampling box: depth component above -1, velocities in [-1.5, 1.5].
pub fn default_box(sys: &SystemDef) -> SampleBox {
    let n = sys.size();
    if sys.is_shallow_water_shaped() {
        let mut b = SampleBox::uniform(n, -1.5, 1.5);
        b.lower[0] = -0.95;
        b
    } else {
        SampleBox::uniform(n, -1.0, 1.0)
    }
}

/// Structural assumption report; the flag is `true` when everything applicable passed.
pub fn cmd_check_system(sys: &SystemDef) -> Result<(String, bool), CliError> {
    let names = sys.var_names();
    let mut out = String::new();
    let _ = writeln!(out, "system {}: d = {}, n = {}", sys.name(), sys.dim(), sys.size());
    let mut ok = true;

    let (a1, degree) = check_polynomial(sys);
    report_lines(&mut out, &a1, &format!("polynomial coefficient matrices (degree {degree})"), names);

    let bounds = default_box(sys);
    if sys.symmetrizers().is_empty() {
        let _ = writeln!(out, "S.1  FAIL  no symmetrizer registered");
        let _ = writeln!(out, "AS   -     no symmetrizer registered");
        ok = false;
    }
    let mut pending_as = Vec::new();
    for s in sys.symmetrizers() {
        let samples = domain_samples(sys, s.variant, &bounds)?;
        let what = format!("{} symmetrizer on {} samples in {}", s.variant.as_str(), samples.len(), s.domain);
        let report = check_symmetrizer_variant(sys, s.variant, &samples)?;
        ok &= report.passed();
        report_lines(&mut out, &report, &what, names);
        pending_as.push((check_compatibility_variant(sys, s.variant, &samples)?, what));
    }
    for (report, what) in pending_as {
        ok &= report.passed();
        report_lines(&mut out, &report, &what, names);
    }
    match check_factorization(sys) {
        Some(report) => {
            ok &= report.passed();
            report_lines(&mut out, &report, "A_j = S_j^0 S(U) as polynomial identities", names);
        }
        None => {
            let _ = writeln!(out, "A2   -     no factorization registered");
        }
    }
    Ok((out, ok))
}

/// `J_N` for each `N`, `jn.csv`, and the fitted slope when there are at least two values.
pub fn cmd_probe_jn(cfg: &ExperimentConfig) -> Result<(Vec<JnSample>, Option<f64>, String), CliError> {
    let n_list = cfg.n_list.clone().unwrap_or_else(|| vec![32, 64, 128, 256]);
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("`N_list` must be non-empty and strictly increasing".into()));
    }
    let p = cfg.p.unwrap_or(1);
    let q = cfg.q.unwrap_or(0);
    let variant = match cfg.variant.as_deref().unwrap_or("standard") {
        "standard" => EnergyVariant::Standard,
        "hamiltonian" => EnergyVariant::Hamiltonian,
        other => return Err(CliError::Config(format!("unknown variant `{other}` (standard, hamiltonian)"))),
    };
    if q >= p {
        return Err(CliError::Config(format!("probe-jn needs 0 <= q < p, got p = {p}, q = {q}")));
    }
    let samples = n_list.iter().map(|&n| jn_probe_1d(p, q, n, variant)).collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = samples.iter().map(|s| s.n as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let slope = least_squares_slope(&xs, &ys);

    let dir = cfg.output_dir();
    create_dir(&dir)?;
    output::write_jn(&dir.join("jn.csv"), &samples)?;
    let mut text = String::new();
    let _ = writeln!(text, "{:>6}  {:>14}  {:>14}", "N", "J_N", "J_N + pi(N-q)/8");
    for s in &samples {
        let _ = writeln!(text, "{:>6}  {:>14.6}  {:>14.3e}", s.n, s.value, s.remainder);
    }
    match slope {
        Some(m) => {
            let _ = writeln!(text, "slope = {m:.6} (-pi/8 = {:.6})", -std::f64::consts::PI / 8.0);
        }
        None => {
            let _ = writeln!(text, "slope: needs at least two values of N");
        }
    }
    write_text(&dir.join("summary.txt"), &text)?;
    Ok((samples, slope, text))
}

pub fn list_presets() -> Result<String, CliError> {
    let mut out = String::new();
    for (name, _) in PRESETS {
        let cfg = crate::presets::preset(name)?;
        let _ = writeln!(
            out,
            "{name:<28} {:<10} {}",
            cfg.command.as_deref().unwrap_or("-"),
            cfg.description.as_deref().unwrap_or("")
        );
    }
    Ok(out)
}
