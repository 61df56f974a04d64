//! Fourier pseudospectral semi-discretizations of quasilinear first-order
//! hyperbolic systems on periodic domains.
//!
//! The crate covers the full numerical pipeline:
//!
//! * [`spectral`]: periodic grids, transforms, spectral differentiation,
//!   sharp and smooth low-pass filters, dealiasing and Sobolev norms.
//! * [`systems`]: quasilinear systems with polynomial coefficient matrices,
//!   the Saint-Venant systems, symmetrizers and structural checks.
//! * [`semidisc`]: right-hand sides of the sharp, smooth and
//!   smooth-on-nonlinear-terms semi-discretizations.
//! * [`timeint`]: fixed-step RK4 with blow-up detection and monitors.
//! * [`analysis`]: initial data catalog, error metrics, EOC, energy
//!   functionals, the `J_N` probe and the convergence-study driver.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. In that configuration an [`FftBackend`] has to be supplied through
//! [`Grid::with_backend`]; with `std` enabled, [`Grid::new`] uses rustfft.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod poly;
pub mod semidisc;
pub mod spectral;
pub mod systems;
pub mod timeint;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::{Matrix, Poly, PolyMatrix};

pub use semidisc::{SchemeKind, SchemeSpec};
pub use spectral::{FftBackend, FilterKind, FilterSpec, Grid, SpectralField, StateField};
pub use systems::{EnergyVariant, SystemDef};
pub use timeint::{EvolveConfig, EvolveResult, EvolveStatus, Monitor};
