//! The `J_N` probe: `(P_N(S(U)(Id - P_N)(A_j(U) ∂_j P_N V)), V)_{L²}`.
//!
//! Large `|J_N|` shows that the commutator structure needed for sharp-filter
//! energy estimates is missing for the chosen symmetrizer.

#![cfg_attr(not(feature = "std"), allow(unused_imports))]

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::poly::PolyMatrix;
use crate::spectral::{FilterSpec, Grid, SpectralField, StateField};
use crate::systems::{saint_venant_1d, EnergyVariant, SystemDef};
use crate::{Error, Result};

/// One probe evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JnSample {
    pub n: usize,
    pub value: f64,
    /// `J_N + π(N - q)/8`.
    pub remainder: f64,
}

/// Pointwise `M(U) W` without dealiasing; exact when the grid resolves the product.
fn apply_matrix(m: &PolyMatrix, u: &StateField, w: &StateField) -> Result<StateField> {
    let grid = u.grid();
    let n = u.len();
    let up: Vec<Vec<f64>> = u.components().iter().map(|c| c.physical()).collect();
    let wp: Vec<Vec<f64>> = w.components().iter().map(|c| c.physical()).collect();
    let mut out = alloc::vec![alloc::vec![0.0; grid.len()]; n];
    let mut point = alloc::vec![0.0; n];
    for x in 0..grid.len() {
        for (c, p) in point.iter_mut().enumerate() {
            *p = up[c][x];
        }
        let mx = m.eval(&point);
        for (r, o) in out.iter_mut().enumerate() {
            o[x] = (0..n).map(|c| mx.get(r, c) * wp[c][x]).sum();
        }
    }
    StateField::new(out.iter().map(|o| SpectralField::from_physical(grid, o)).collect())
}

/// Evaluates `J_N` on the grid of `u`.
///
/// The grid must resolve every intermediate product: `2M ≥ 3(N + r)` where
/// `r` is the support radius of `u` times the largest coefficient degree.
pub fn jn_probe(
    sys: &SystemDef,
    u: &StateField,
    v: &StateField,
    cutoff: usize,
    axis: usize,
    variant: EnergyVariant,
) -> Result<f64> {
    if u.len() != sys.size() || v.len() != sys.size() {
        return Err(Error::ComponentMismatch { expected: sys.size(), got: u.len().min(v.len()) });
    }
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let s = sys.symmetrizer_for(variant).ok_or(Error::MissingSymmetrizer(variant.as_str()))?;
    let grid = u.grid();
    let radius = u.components().iter().map(|c| c.support_radius(1e-14)).max().unwrap_or(0);
    let degree = sys.flux(axis.min(sys.dim() - 1)).degree().max(s.matrix.degree()).max(1) as usize;
    let required = 3 * (cutoff + radius * degree);
    if grid.points_per_axis() < required {
        return Err(Error::ProbeUnderResolved { two_m: grid.points_per_axis(), required });
    }
    if axis >= sys.dim() {
        return Err(Error::AxisOutOfRange { axis, dim: sys.dim() });
    }
    let p_n = FilterSpec::sharp(cutoff);

    let vn = v.apply_filter(&p_n)?;
    let w = StateField::new(vn.components().iter().map(|c| c.differentiate(axis)).collect::<Result<Vec<_>>>()?)?;
    let x = apply_matrix(sys.flux(axis), u, &w)?;
    let mut y = x.clone();
    y.axpy(-1.0, &x.apply_filter(&p_n)?);
    let z = apply_matrix(&s.matrix, u, &y)?.apply_filter(&p_n)?;
    z.l2_inner(v)
}

/// Smallest power-of-two `M` with `2M ≥ 3(N + p)`.
pub fn probe_half(cutoff: usize, p: usize) -> usize {
    let need = 3 * (cutoff + p);
    let mut half = 4;
    while 2 * half < need {
        half *= 2;
    }
    half
}

/// `J_N` for the 1D Saint-Venant system with `U = (-½cos px, sin px)` and
/// `V = (0, sin((N-q)x))`.
#[cfg(feature = "std")]
pub fn jn_probe_1d(p: usize, q: usize, cutoff: usize, variant: EnergyVariant) -> Result<JnSample> {
    if p == 0 || q >= p {
        return Err(Error::InvalidParameter {
            name: "q",
            reason: alloc::format!("0 <= q < p required, got p = {p}, q = {q}"),
        });
    }
    if cutoff <= q + p {
        return Err(Error::InvalidParameter {
            name: "N",
            reason: alloc::format!("N must exceed p + q, got N = {cutoff}"),
        });
    }
    let grid = Grid::new(1, probe_half(cutoff, p))?;
    let pf = p as f64;
    let kv = (cutoff - q) as f64;
    let u = StateField::new(alloc::vec![
        SpectralField::from_function(&grid, |x| -0.5 * libm::cos(pf * x[0]))?,
        SpectralField::from_function(&grid, |x| libm::sin(pf * x[0]))?,
    ])?;
    let v = StateField::new(alloc::vec![
        SpectralField::zeros(&grid),
        SpectralField::from_function(&grid, |x| libm::sin(kv * x[0]))?,
    ])?;
    let value = jn_probe(&saint_venant_1d(), &u, &v, cutoff, 0, variant)?;
    Ok(JnSample { n: cutoff, value, remainder: value + PI * kv / 8.0 })
}
