//! Initial data catalog, error metrics, energy functionals, the `J_N`
//! probe and the convergence-study driver.

mod energy;
mod initial;
mod metrics;
mod probe;
mod study;

pub use energy::{energy_functional, second_derivative_max, symmetrizer_bounds};
pub use initial::{InitialData, InitialKind};
pub use metrics::{eoc, least_squares_slope, projection_error, relative_error};
pub use probe::{jn_probe, probe_half, JnSample};
pub use study::{assemble_report, ConvergenceReport, ReportRow, RowOutcome, StudyJob, StudySpec};

// These build their own grids and therefore need the default FFT backend.
#[cfg(feature = "std")]
pub use probe::jn_probe_1d;
#[cfg(feature = "std")]
pub use study::{convergence_study, run_reference, run_row};
