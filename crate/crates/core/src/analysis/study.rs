//! Convergence studies against a fine sharp-filter reference run.
//!
//! The driver is split into [`run_reference`], [`run_row`] and
//! [`assemble_report`] so callers can evaluate rows concurrently;
//! [`convergence_study`] runs everything in order.

#![cfg_attr(not(feature = "std"), allow(unused_imports))]

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{eoc, relative_error, InitialData};
use crate::semidisc::{SchemeKind, SchemeSpec};
use crate::spectral::{Grid, StateField};
use crate::systems::SystemDef;
use crate::timeint::{evolve, EvolveConfig, EvolveStatus};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct StudySpec {
    pub system: SystemDef,
    pub schemes: Vec<SchemeKind>,
    pub initial: InitialData,
    /// Half-resolutions `M` of the study rows.
    pub halves: Vec<usize>,
    pub reference_half: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Sobolev indices of the reported errors.
    pub norms: Vec<f64>,
}

impl StudySpec {
    pub fn validate(&self) -> Result<()> {
        if self.halves.is_empty() || self.schemes.is_empty() || self.norms.is_empty() {
            return Err(Error::InvalidConfig("study needs resolutions, schemes and norms".into()));
        }
        if self.halves.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("study resolutions must be strictly increasing".into()));
        }
        let finest = *self.halves.last().expect("non-empty");
        if self.reference_half <= finest {
            return Err(Error::ReferenceTooCoarse { reference: self.reference_half, solution: finest });
        }
        if self.initial.dim() != self.system.dim() {
            return Err(Error::InvalidConfig(format!(
                "initial data `{}` does not match the {}-dimensional system",
                self.initial.name(),
                self.system.dim()
            )));
        }
        EvolveConfig::new(self.dt, self.t_final).step_sizes()?;
        Ok(())
    }

    /// Row jobs in report order: by resolution, then scheme.
    pub fn jobs(&self) -> Vec<StudyJob> {
        self.halves.iter().flat_map(|&half| self.schemes.iter().map(move |&scheme| StudyJob { half, scheme })).collect()
    }

    pub fn reference_description(&self) -> String {
        format!(
            "{} reference, 2M = {}, dt = {}, T = {}",
            SchemeKind::SharpAll.name(),
            2 * self.reference_half,
            self.dt,
            self.t_final
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StudyJob {
    pub half: usize,
    pub scheme: SchemeKind,
}

/// Result of one row before EOCs are known.
#[derive(Debug, Clone, PartialEq)]
pub struct RowOutcome {
    pub job: StudyJob,
    /// One entry per norm; `None` after blow-up.
    pub errors: Vec<Option<f64>>,
    pub status: EvolveStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub half: usize,
    pub scheme: SchemeKind,
    pub errors: Vec<Option<f64>>,
    /// EOC to the next resolution of the same scheme; `None` on its last row.
    pub eocs: Vec<Option<f64>>,
    pub status: EvolveStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub norms: Vec<f64>,
    pub rows: Vec<ReportRow>,
    pub reference: String,
}

impl ConvergenceReport {
    /// Rows of one scheme, by increasing resolution.
    pub fn scheme_rows(&self, scheme: SchemeKind) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| r.scheme == scheme).collect()
    }
}

/// Sharp-filter run on the reference grid.
#[cfg(feature = "std")]
pub fn run_reference(spec: &StudySpec) -> Result<StateField> {
    spec.validate()?;
    let grid = Grid::new(spec.system.dim(), spec.reference_half)?;
    let u0 = spec.initial.initial_state(&grid)?;
    let r =
        evolve(&SchemeSpec::new(SchemeKind::SharpAll), &spec.system, &u0, &EvolveConfig::new(spec.dt, spec.t_final))?;
    match r.status {
        EvolveStatus::Completed => Ok(r.final_state),
        EvolveStatus::BlowUp { time } => Err(Error::ReferenceBlowUp { time }),
    }
}

#[cfg(feature = "std")]
pub fn run_row(spec: &StudySpec, reference: &StateField, job: StudyJob) -> Result<RowOutcome> {
    let grid = Grid::new(spec.system.dim(), job.half)?;
    let u0 = spec.initial.initial_state(&grid)?;
    let r = evolve(&SchemeSpec::new(job.scheme), &spec.system, &u0, &EvolveConfig::new(spec.dt, spec.t_final))?;
    let errors = match r.status {
        EvolveStatus::Completed => spec
            .norms
            .iter()
            .map(|&s| relative_error(&r.final_state, reference, s).map(Some))
            .collect::<Result<Vec<_>>>()?,
        EvolveStatus::BlowUp { .. } => spec.norms.iter().map(|_| None).collect(),
    };
    Ok(RowOutcome { job, errors, status: r.status })
}

/// Orders outcomes as [`StudySpec::jobs`] and fills in EOCs.
pub fn assemble_report(spec: &StudySpec, mut outcomes: Vec<RowOutcome>) -> ConvergenceReport {
    let order = spec.jobs();
    outcomes.sort_by_key(|o| order.iter().position(|j| *j == o.job).unwrap_or(usize::MAX));
    let mut rows: Vec<ReportRow> = outcomes
        .iter()
        .map(|o| ReportRow {
            half: o.job.half,
            scheme: o.job.scheme,
            errors: o.errors.clone(),
            eocs: spec.norms.iter().map(|_| None).collect(),
            status: o.status,
        })
        .collect();
    for i in 0..rows.len() {
        let next = (i + 1..rows.len()).find(|&k| rows[k].scheme == rows[i].scheme);
        if let Some(k) = next {
            let ratio = rows[k].half as f64 / rows[i].half as f64;
            let eocs = rows[i]
                .errors
                .iter()
                .zip(&rows[k].errors)
                .map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => eoc(*a, *b, ratio),
                    _ => None,
                })
                .collect();
            rows[i].eocs = eocs;
        }
    }
    ConvergenceReport { norms: spec.norms.clone(), rows, reference: spec.reference_description() }
}

/// Reference run, every row in order, then EOCs.
#[cfg(feature = "std")]
pub fn convergence_study(spec: &StudySpec) -> Result<ConvergenceReport> {
    let reference = run_reference(spec)?;
    let outcomes = spec.jobs().into_iter().map(|job| run_row(spec, &reference, job)).collect::<Result<Vec<_>>>()?;
    Ok(assemble_report(spec, outcomes))
}
