//! Relative errors, EOC and slope fitting.

use crate::spectral::{FilterSpec, StateField};
use crate::{Error, Result};

/// `|u - ref|_{H^s} / |ref|_{H^s}` with `u` zero-padded onto the reference grid.
pub fn relative_error(u: &StateField, reference: &StateField, s: f64) -> Result<f64> {
    if u.len() != reference.len() {
        return Err(Error::ComponentMismatch { expected: reference.len(), got: u.len() });
    }
    let mut diff = u.zero_padded(reference.grid())?;
    diff.axpy(-1.0, reference);
    let denom = reference.sobolev_norm(s)?;
    Ok(diff.sobolev_norm(s)? / denom)
}

/// `|f - P_N f|_{H^s} / |f|_{H^s}`.
pub fn projection_error(f: &StateField, cutoff: usize, s: f64) -> Result<f64> {
    let mut diff = f.apply_filter(&FilterSpec::sharp(cutoff))?;
    diff.axpy(-1.0, f);
    Ok(diff.sobolev_norm(s)? / f.sobolev_norm(s)?)
}

/// `log(e_coarse / e_fine) / log(ratio)` where `ratio` is the resolution
/// factor between the runs. `None` when either error is not positive.
pub fn eoc(e_coarse: f64, e_fine: f64, ratio: f64) -> Option<f64> {
    if e_coarse > 0.0 && e_fine > 0.0 && e_coarse.is_finite() && e_fine.is_finite() && ratio > 1.0 {
        Some(libm::log(e_coarse / e_fine) / libm::log(ratio))
    } else {
        None
    }
}

/// Ordinary least-squares slope of `ys` against `xs`; `None` for fewer than
/// two distinct abscissae.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}
