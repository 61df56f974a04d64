//! Fixed-step classical RK4 with blow-up detection and sampled monitors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::analysis::second_derivative_max;
use crate::semidisc::{rhs, SchemeSpec};
use crate::spectral::StateField;
use crate::systems::{hamiltonian_energy, hyperbolicity_margin, SystemDef};
use crate::{Error, Result};

/// Default L∞ growth factor that counts as blow-up.
pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e6;
/// Target number of monitor samples per trajectory.
pub const MONITOR_SAMPLES: usize = 200;

/// Scalar diagnostic recorded along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum Monitor {
    /// `|U|_{H^s}`.
    Sobolev(f64),
    /// Minimum of the named hyperbolicity predicate over the grid.
    Margin(String),
    /// `½∫ η² + (1+η)|u|²`.
    Hamiltonian,
    /// `max |∂²_axis U_component|`.
    MaxSecondDerivative { component: usize, axis: usize },
}

impl Monitor {
    /// Column label such as `Hs1`, `margin_U`, `hamiltonian` or `max_d2u`.
    pub fn label(&self, sys: &SystemDef) -> String {
        match self {
            Monitor::Sobolev(s) => format!("Hs{s}"),
            Monitor::Margin(name) => format!("margin_{name}"),
            Monitor::Hamiltonian => "hamiltonian".into(),
            Monitor::MaxSecondDerivative { component, axis } => {
                let var = sys.var_names().get(*component).map(String::as_str).unwrap_or("?");
                if sys.dim() == 1 {
                    format!("max_d2{var}")
                } else {
                    format!("max_d2{var}_{}", ["x", "y"].get(*axis).unwrap_or(&"?"))
                }
            }
        }
    }

    fn validate(&self, sys: &SystemDef) -> Result<()> {
        match self {
            Monitor::Sobolev(s) if *s < 0.0 => Err(Error::NegativeRegularity(*s)),
            Monitor::Margin(name) if sys.predicate(name).is_none() => {
                Err(Error::InvalidConfig(format!("system `{}` has no predicate `{name}`", sys.name())))
            }
            Monitor::Hamiltonian if !sys.is_shallow_water_shaped() => Err(Error::InvalidConfig(format!(
                "hamiltonian monitor needs (eta, velocity) components, system `{}` has {}",
                sys.name(),
                sys.size()
            ))),
            Monitor::MaxSecondDerivative { component, axis } if *component >= sys.size() || *axis >= sys.dim() => {
                Err(Error::InvalidConfig(format!("second-derivative monitor out of range: {self:?}")))
            }
            _ => Ok(()),
        }
    }

    fn evaluate(&self, sys: &SystemDef, state: &StateField) -> Result<f64> {
        match self {
            Monitor::Sobolev(s) => state.sobolev_norm(*s),
            Monitor::Margin(name) => {
                let margins = hyperbolicity_margin(sys, state)?;
                Ok(margins.into_iter().find(|(n, _)| n == name).map(|(_, v)| v).unwrap_or(f64::NAN))
            }
            Monitor::Hamiltonian => hamiltonian_energy(state),
            Monitor::MaxSecondDerivative { component, axis } => second_derivative_max(state, *component, *axis),
        }
    }

    /// The monitors written by default for a system: `H^0`, `H^1`, every
    /// predicate margin, the Hamiltonian (for shallow-water shaped systems) and
    /// `max |∂²_x u|`.
    pub fn defaults(sys: &SystemDef) -> Vec<Monitor> {
        let mut out = alloc::vec![Monitor::Sobolev(0.0), Monitor::Sobolev(1.0)];
        out.extend(sys.predicates().iter().map(|p| Monitor::Margin(p.name.clone())));
        if sys.is_shallow_water_shaped() {
            out.push(Monitor::Hamiltonian);
            out.push(Monitor::MaxSecondDerivative { component: 1, axis: 0 });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub dt: f64,
    pub t_final: f64,
    pub monitors: Vec<Monitor>,
    pub blowup_threshold: f64,
    /// Sample cadence in steps; `None` targets [`MONITOR_SAMPLES`] samples.
    pub sample_every: Option<usize>,
}

impl EvolveConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self { dt, t_final, monitors: Vec::new(), blowup_threshold: DEFAULT_BLOWUP_THRESHOLD, sample_every: None }
    }

    pub fn with_monitors(mut self, monitors: Vec<Monitor>) -> Self {
        self.monitors = monitors;
        self
    }

    /// Step sizes: `⌊T/dt⌋` full steps plus a final partial step landing on `T`.
    pub fn step_sizes(&self) -> Result<(usize, Option<f64>)> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {}", self.dt) });
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter {
                name: "T",
                reason: format!("must be non-negative, got {}", self.t_final),
            });
        }
        if !(self.blowup_threshold > 1.0) {
            return Err(Error::InvalidParameter {
                name: "blowup_threshold",
                reason: format!("must exceed 1, got {}", self.blowup_threshold),
            });
        }
        let ratio = self.t_final / self.dt;
        let full = libm::floor(ratio + 1e-9) as usize;
        let rest = self.t_final - full as f64 * self.dt;
        let partial = if rest > 1e-9 * self.dt { Some(rest) } else { None };
        Ok((full, partial))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolveStatus {
    Completed,
    /// Detector fired at this time; the final state is the last finite one.
    BlowUp {
        time: f64,
    },
}

impl EvolveStatus {
    pub fn is_blow_up(&self) -> bool {
        matches!(self, EvolveStatus::BlowUp { .. })
    }
}

/// Monitor time series, one row per sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonitorSeries {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl MonitorSeries {
    /// Values of the column `label`.
    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let i = self.labels.iter().position(|l| l == label)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub final_state: StateField,
    /// Time of `final_state`.
    pub final_time: f64,
    pub status: EvolveStatus,
    pub steps: usize,
    pub monitors: MonitorSeries,
}

/// An RK4 stage produced a non-finite value or failed.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFault {
    /// 1..=4 for the stage evaluations, 5 for the final combination.
    pub stage: u8,
    pub error: Error,
}

/// Classical RK4 update `U + dt/6 (k1 + 2k2 + 2k3 + k4)`.
pub fn rk4_step<F>(mut f: F, state: &StateField, dt: f64) -> core::result::Result<StateField, StepFault>
where
    F: FnMut(&StateField) -> Result<StateField>,
{
    let mut eval = |s: &StateField, stage: u8| -> core::result::Result<StateField, StepFault> {
        let k = f(s).map_err(|error| StepFault { stage, error })?;
        if !k.is_finite() {
            return Err(StepFault { stage, error: Error::NonFinite });
        }
        Ok(k)
    };
    let k1 = eval(state, 1)?;
    let mut tmp = state.clone();
    tmp.axpy(0.5 * dt, &k1);
    let k2 = eval(&tmp, 2)?;
    let mut tmp = state.clone();
    tmp.axpy(0.5 * dt, &k2);
    let k3 = eval(&tmp, 3)?;
    let mut tmp = state.clone();
    tmp.axpy(dt, &k3);
    let k4 = eval(&tmp, 4)?;

    let mut out = state.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    if !out.is_finite() {
        return Err(StepFault { stage: 5, error: Error::NonFinite });
    }
    Ok(out)
}

/// Integrates `scheme` from `state0` to `cfg.t_final`.
///
/// Non-finite values or `L∞ > threshold · L∞(0)` end the run with
/// [`EvolveStatus::BlowUp`]. Errors are reserved for invalid input.
pub fn evolve(scheme: &SchemeSpec, sys: &SystemDef, state0: &StateField, cfg: &EvolveConfig) -> Result<EvolveResult> {
    let (full, partial) = cfg.step_sizes()?;
    for m in &cfg.monitors {
        m.validate(sys)?;
    }
    scheme.cutoff_for(state0.grid())?;
    if state0.len() != sys.size() {
        return Err(Error::ComponentMismatch { expected: sys.size(), got: state0.len() });
    }
    if !state0.is_finite() {
        return Err(Error::NonFinite);
    }

    let total_steps = full + usize::from(partial.is_some());
    let every = cfg.sample_every.unwrap_or_else(|| total_steps.div_ceil(MONITOR_SAMPLES)).max(1);
    let mut series =
        MonitorSeries { labels: cfg.monitors.iter().map(|m| m.label(sys)).collect(), ..MonitorSeries::default() };
    let sample = |t: f64, s: &StateField, series: &mut MonitorSeries| -> Result<()> {
        if cfg.monitors.is_empty() {
            return Ok(());
        }
        let row = cfg.monitors.iter().map(|m| m.evaluate(sys, s)).collect::<Result<Vec<_>>>()?;
        series.times.push(t);
        series.rows.push(row);
        Ok(())
    };

    let limit = cfg.blowup_threshold * state0.max_abs();
    let mut state = state0.clone();
    let mut t = 0.0;
    let mut status = EvolveStatus::Completed;
    let mut steps = 0;
    sample(t, &state, &mut series)?;

    for step in 0..total_steps {
        let is_last = step + 1 == total_steps;
        let h = if step < full { cfg.dt } else { partial.unwrap_or(cfg.dt) };
        let t_next = if is_last { cfg.t_final } else { (step + 1) as f64 * cfg.dt };
        match rk4_step(|s| rhs(scheme, sys, s), &state, h) {
            Ok(next) if next.max_abs() <= limit || limit == 0.0 && next.max_abs() == 0.0 => {
                state = next;
                t = t_next;
                steps += 1;
            }
            Ok(_) | Err(StepFault { error: Error::NonFinite, .. }) => {
                status = EvolveStatus::BlowUp { time: t_next };
                break;
            }
            Err(StepFault { error, .. }) => return Err(error),
        }
        if steps % every == 0 || is_last {
            sample(t, &state, &mut series)?;
        }
    }
    if status.is_blow_up() && series.times.last() != Some(&t) {
        sample(t, &state, &mut series)?;
    }

    Ok(EvolveResult { final_state: state, final_time: t, status, steps, monitors: series })
}
