//! Periodic grids, transforms, spectral differentiation, low-pass filters,
//! dealiasing and Sobolev norms.

mod fft;
mod field;
mod filter;
mod grid;

use alloc::vec::Vec;

pub use fft::FftBackend;
#[cfg(feature = "std")]
pub use fft::RustFftBackend;
pub use field::{SpectralField, StateField};
pub use filter::{smooth_profile, FilterKind, FilterSpec};
pub use grid::Grid;

use crate::{Error, Result};

/// Collocation product `a·b` (no dealiasing).
pub fn pointwise_product(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let pa = a.physical();
    let pb = b.physical();
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    Ok(SpectralField::from_physical(a.grid(), &prod))
}

/// Collocation product followed by the two-thirds dealiasing.
pub fn dealiased_product(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    Ok(pointwise_product(a, b)?.dealias())
}
