//! Spatial right-hand sides of the sharp, smooth and
//! smooth-on-nonlinear-terms semi-discretizations.
//!
//! Nonlinear products are formed at the collocation points and the top third
//! of the modes is zeroed afterwards, which is exact for quadratic terms.

use alloc::vec;
use alloc::vec::Vec;

use crate::poly::{Poly, PolyMatrix};
use crate::spectral::{dealiased_product, FilterSpec, Grid, SpectralField, StateField};
use crate::systems::{saint_venant_2d_hamiltonian, saint_venant_2d_standard, SystemDef};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// `-P_N(Σ A_j(U) ∂_j U)`
    SharpAll,
    /// `-S_N(Σ A_j(U) ∂_j U)`
    SmoothAll,
    /// `-Σ [A_j^0 ∂_j U + S_N(A_j^1(U) ∂_j U)]`
    SmoothNonlinearOnly,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::SharpAll, SchemeKind::SmoothAll, SchemeKind::SmoothNonlinearOnly];

    /// Short name used in configuration files and reports.
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::SharpAll => "sharp",
            SchemeKind::SmoothAll => "smooth-all",
            SchemeKind::SmoothNonlinearOnly => "smooth-nl",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Scheme plus an optional cutoff; `None` means the grid's dealiasing cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub cutoff: Option<usize>,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind) -> Self {
        Self { kind, cutoff: None }
    }

    pub fn with_cutoff(kind: SchemeKind, cutoff: usize) -> Self {
        Self { kind, cutoff: Some(cutoff) }
    }

    pub fn cutoff_for(&self, grid: &Grid) -> Result<usize> {
        let n = self.cutoff.unwrap_or_else(|| grid.dealias_cutoff());
        if n > grid.half() {
            return Err(Error::CutoffTooLarge { cutoff: n, half: grid.half() });
        }
        Ok(n)
    }

    /// Filter applied to the (nonlinear) flux terms.
    pub fn filter_for(&self, grid: &Grid) -> Result<FilterSpec> {
        let n = self.cutoff_for(grid)?;
        Ok(match self.kind {
            SchemeKind::SharpAll => FilterSpec::sharp(n),
            SchemeKind::SmoothAll | SchemeKind::SmoothNonlinearOnly => FilterSpec::smooth(n),
        })
    }

    /// Projection applied to initial data: always the sharp filter.
    pub fn projection_for(&self, grid: &Grid) -> Result<FilterSpec> {
        Ok(FilterSpec::sharp(self.cutoff_for(grid)?))
    }
}

/// Degree-one entry `c0 + Σ c_i U_i`, evaluated without the generic polynomial machinery.
#[derive(Debug, Clone)]
struct LinearEntry {
    constant: f64,
    coeffs: Vec<(usize, f64)>,
}

impl LinearEntry {
    fn compile(p: &Poly) -> Option<Self> {
        if p.degree() > 1 {
            return None;
        }
        let mut out = LinearEntry { constant: 0.0, coeffs: Vec::new() };
        for (exps, c) in p.terms() {
            match exps.iter().position(|&e| e == 1) {
                Some(i) => out.coeffs.push((i, c)),
                None => out.constant = c,
            }
        }
        Some(out)
    }

    fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.coeffs.is_empty()
    }
}

fn check_state(sys: &SystemDef, state: &StateField) -> Result<()> {
    if state.len() != sys.size() {
        return Err(Error::ComponentMismatch { expected: sys.size(), got: state.len() });
    }
    if state.grid().dim() != sys.dim() {
        return Err(Error::InvalidSystem(alloc::format!(
            "system `{}` is {}-dimensional but the grid is {}-dimensional",
            sys.name(),
            sys.dim(),
            state.grid().dim()
        )));
    }
    Ok(())
}

/// `Σ_j F_j(U) ∂_j U` for the given flux matrices, dealiased.
fn flux_sum(fluxes: &[&PolyMatrix], state: &StateField) -> Result<StateField> {
    let grid = state.grid();
    let n = state.len();
    let derivs: Vec<Vec<SpectralField>> = (0..fluxes.len())
        .map(|j| state.components().iter().map(|c| c.differentiate(j)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let compiled: Option<Vec<Vec<LinearEntry>>> = fluxes
        .iter()
        .map(|f| (0..n * n).map(|idx| LinearEntry::compile(f.get(idx / n, idx % n))).collect::<Option<Vec<_>>>())
        .collect();

    let out = match compiled {
        Some(entries) => linear_flux_sum(grid, &entries, state, &derivs),
        None => general_flux_sum(fluxes, state, &derivs)?,
    };
    Ok(out)
}

/// Pointwise accumulation over axes and columns, then one forward transform
/// per output component.
fn linear_flux_sum(
    grid: &Grid,
    entries: &[Vec<LinearEntry>],
    state: &StateField,
    derivs: &[Vec<SpectralField>],
) -> StateField {
    let n = state.len();
    let len = grid.len();
    let u: Vec<Vec<f64>> = state.components().iter().map(SpectralField::physical).collect();
    let du: Vec<Vec<Vec<f64>>> = derivs.iter().map(|axis| axis.iter().map(SpectralField::physical).collect()).collect();
    let mut components = Vec::with_capacity(n);
    for r in 0..n {
        let mut acc = vec![0.0; len];
        for (j, axis_entries) in entries.iter().enumerate() {
            for (c, entry) in axis_entries[r * n..(r + 1) * n].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let d = &du[j][c];
                for (x, a) in acc.iter_mut().enumerate() {
                    let mut coef = entry.constant;
                    for &(i, ci) in &entry.coeffs {
                        coef += ci * u[i][x];
                    }
                    *a += coef * d[x];
                }
            }
        }
        components.push(SpectralField::from_physical(grid, &acc).dealias());
    }
    StateField::new(components).expect("components share the grid")
}

/// Monomial-by-monomial evaluation with a dealiasing projection after every
/// pairwise product.
fn general_flux_sum(fluxes: &[&PolyMatrix], state: &StateField, derivs: &[Vec<SpectralField>]) -> Result<StateField> {
    let n = state.len();
    let grid = state.grid();
    let mut components = Vec::with_capacity(n);
    for r in 0..n {
        let mut acc = SpectralField::zeros(grid);
        for (j, flux) in fluxes.iter().enumerate() {
            for (c, deriv) in derivs[j].iter().enumerate() {
                for (exps, coef) in flux.get(r, c).terms() {
                    let mut term = deriv.clone();
                    for (i, &e) in exps.iter().enumerate() {
                        for _ in 0..e {
                            term = dealiased_product(&term, state.component(i))?;
                        }
                    }
                    acc.axpy(coef, &term);
                }
            }
        }
        components.push(acc.dealias());
    }
    StateField::new(components)
}

/// `A_j(U) ∂_j U`, formed at the collocation points and dealiased.
pub fn advective_term(sys: &SystemDef, state: &StateField, axis: usize) -> Result<StateField> {
    check_state(sys, state)?;
    if axis >= sys.dim() {
        return Err(Error::AxisOutOfRange { axis, dim: sys.dim() });
    }
    flux_sum(&[sys.flux(axis)], state)
}

/// `Σ_j A_j(U) ∂_j U`.
pub fn total_advective_term(sys: &SystemDef, state: &StateField) -> Result<StateField> {
    check_state(sys, state)?;
    let fluxes: Vec<&PolyMatrix> = (0..sys.dim()).map(|j| sys.flux(j)).collect();
    flux_sum(&fluxes, state)
}

/// Semi-discrete right-hand side `dU/dt` of the chosen scheme.
///
/// Returns [`Error::NonFinite`] when the result contains NaN or infinity.
pub fn rhs(scheme: &SchemeSpec, sys: &SystemDef, state: &StateField) -> Result<StateField> {
    check_state(sys, state)?;
    let grid = state.grid();
    let filter = scheme.filter_for(grid)?;
    let mut out = match scheme.kind {
        SchemeKind::SharpAll | SchemeKind::SmoothAll => total_advective_term(sys, state)?.apply_filter(&filter)?,
        SchemeKind::SmoothNonlinearOnly => {
            let varying: Vec<&PolyMatrix> = (0..sys.dim()).map(|j| sys.flux_varying(j)).collect();
            let mut total = flux_sum(&varying, state)?.apply_filter(&filter)?;
            let linear = constant_flux_term(sys, state)?;
            total.axpy(1.0, &linear);
            total
        }
    };
    out.scale(-1.0);
    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

/// `Σ_j A_j^0 ∂_j U`, applied as a Fourier multiplier.
fn constant_flux_term(sys: &SystemDef, state: &StateField) -> Result<StateField> {
    let n = sys.size();
    let grid = state.grid();
    let mut out: Vec<SpectralField> = (0..n).map(|_| SpectralField::zeros(grid)).collect();
    for j in 0..sys.dim() {
        let a0 = sys.flux_constant(j);
        for c in 0..n {
            if (0..n).all(|r| a0.get(r, c) == 0.0) {
                continue;
            }
            let d = state.component(c).differentiate(j)?;
            for (r, o) in out.iter_mut().enumerate() {
                let a = a0.get(r, c);
                if a != 0.0 {
                    o.axpy(a, &d);
                }
            }
        }
    }
    StateField::new(out)
}

/// Largest coefficient difference between the sharp-filter right-hand sides
/// of the 2D standard and Hamiltonian Saint-Venant systems at `state`.
///
/// The two agree exactly when the velocity is curl-free.
pub fn irrotational_equivalence_check(state: &StateField) -> Result<f64> {
    let scheme = SchemeSpec::new(SchemeKind::SharpAll);
    let a = rhs(&scheme, &saint_venant_2d_standard(), state)?;
    let b = rhs(&scheme, &saint_venant_2d_hamiltonian(), state)?;
    Ok(a.max_coeff_difference(&b))
}
