//! Energy functionals and pointwise derivative diagnostics.

use alloc::vec::Vec;

use crate::spectral::StateField;
use crate::systems::{EnergyVariant, SystemDef};
use crate::{Error, Result};

/// `Λ^s U` with `Λ = (1 - Δ)^{1/2}`.
fn bessel_potential(state: &StateField, s: f64) -> Result<StateField> {
    if s < 0.0 {
        return Err(Error::NegativeRegularity(s));
    }
    let grid = state.grid().clone();
    let weights: Vec<f64> = (0..grid.len())
        .map(|i| {
            let k = grid.mode(i);
            let k2 = (k[0] * k[0] + k[1] * k[1]) as f64;
            libm::pow(1.0 + k2, 0.5 * s)
        })
        .collect();
    let mut comps = state.clone().into_components();
    for c in &mut comps {
        c.multiply_symbol(&weights);
    }
    StateField::new(comps)
}

fn symmetrizer(sys: &SystemDef, variant: EnergyVariant) -> Result<&crate::PolyMatrix> {
    sys.symmetrizer_for(variant).map(|s| &s.matrix).ok_or(Error::MissingSymmetrizer(variant.as_str()))
}

/// `∫ (Λ^s U)ᵀ S(U) (Λ^s U) dx` for the symmetrizer of the given variant, by
/// collocation quadrature.
pub fn energy_functional(sys: &SystemDef, state: &StateField, s: f64, variant: EnergyVariant) -> Result<f64> {
    if state.len() != sys.size() {
        return Err(Error::ComponentMismatch { expected: sys.size(), got: state.len() });
    }
    let sm = symmetrizer(sys, variant)?;
    let w = bessel_potential(state, s)?;
    let u: Vec<Vec<f64>> = state.components().iter().map(|c| c.physical()).collect();
    let w: Vec<Vec<f64>> = w.components().iter().map(|c| c.physical()).collect();
    let n = sys.size();
    let mut point = alloc::vec![0.0; n];
    let mut total = 0.0;
    for x in 0..state.grid().len() {
        for c in 0..n {
            point[c] = u[c][x];
        }
        let m = sm.eval(&point);
        for r in 0..n {
            for c in 0..n {
                total += w[r][x] * m.get(r, c) * w[c][x];
            }
        }
    }
    Ok(total * state.grid().cell_volume())
}

/// Smallest and largest eigenvalue of the symmetrizer over the collocation values of `state`.
pub fn symmetrizer_bounds(sys: &SystemDef, state: &StateField, variant: EnergyVariant) -> Result<(f64, f64)> {
    if state.len() != sys.size() {
        return Err(Error::ComponentMismatch { expected: sys.size(), got: state.len() });
    }
    let sm = symmetrizer(sys, variant)?;
    let u: Vec<Vec<f64>> = state.components().iter().map(|c| c.physical()).collect();
    let mut point = alloc::vec![0.0; sys.size()];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in 0..state.grid().len() {
        for (p, uc) in point.iter_mut().zip(&u) {
            *p = uc[x];
        }
        let ev = sm.eval(&point).symmetric_eigenvalues();
        lo = lo.min(ev[0]);
        hi = hi.max(ev[ev.len() - 1]);
    }
    Ok((lo, hi))
}

/// `max |∂²_axis U_component|` over the collocation points.
pub fn second_derivative_max(state: &StateField, component: usize, axis: usize) -> Result<f64> {
    if component >= state.len() {
        return Err(Error::ComponentMismatch { expected: component + 1, got: state.len() });
    }
    let d2 = state.component(component).differentiate(axis)?.differentiate(axis)?;
    Ok(d2.max_abs())
}

#[cfg(all(test, feature = "std"))]
mod tests {
    use super::*;
    use crate::spectral::{Grid, SpectralField};
    use crate::systems::saint_venant_1d;
    use alloc::vec;
    use core::f64::consts::PI;

    fn state(half: usize, eta: impl Fn(f64) -> f64, u: impl Fn(f64) -> f64) -> StateField {
        let g = Grid::new(1, half).unwrap();
        StateField::new(vec![
            SpectralField::from_function(&g, |x| eta(x[0])).unwrap(),
            SpectralField::from_function(&g, |x| u(x[0])).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let sys = saint_venant_1d();
        let st = state(8, |_| 0.0, |_| 0.0);
        for v in [EnergyVariant::Standard, EnergyVariant::Hamiltonian] {
            assert_eq!(energy_functional(&sys, &st, 1.0, v).unwrap(), 0.0);
        }
    }

    #[test]
    fn unit_depth_energy_of_sine() {
        let sys = saint_venant_1d();
        let st = state(8, |_| 0.0, libm::sin);
        assert!((energy_functional(&sys, &st, 0.0, EnergyVariant::Standard).unwrap() - PI).abs() < 1e-13);
        // Λ sin x = √2 sin x
        assert!((energy_functional(&sys, &st, 1.0, EnergyVariant::Standard).unwrap() - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn hamiltonian_quadratic_form_against_fine_quadrature() {
        let sys = saint_venant_1d();
        let eta = |x: f64| -0.5 * libm::cos(x);
        let st = state(16, eta, libm::sin);
        let got = energy_functional(&sys, &st, 0.0, EnergyVariant::Hamiltonian).unwrap();
        // Midpoint rule on 4000 points, term by term.
        let m = 4000;
        let h = 2.0 * PI / m as f64;
        let mut oracle = 0.0;
        for i in 0..m {
            let x = -PI + (i as f64 + 0.5) * h;
            let (e, u) = (eta(x), libm::sin(x));
            oracle += (e * e + 2.0 * u * e * u + (1.0 + e) * u * u) * h;
        }
        assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
        assert!((got - 1.25 * PI).abs() < 1e-12);
    }

    #[test]
    fn missing_symmetrizer_is_reported() {
        let sys = crate::systems::saint_venant_2d_standard();
        let g = Grid::new(2, 8).unwrap();
        let st = StateField::zeros(&g, 3);
        assert_eq!(
            energy_functional(&sys, &st, 0.0, EnergyVariant::Hamiltonian).unwrap_err(),
            Error::MissingSymmetrizer("hamiltonian")
        );
    }

    #[test]
    fn second_derivatives() {
        let st = state(32, |_| 0.0, libm::sin);
        assert!((second_derivative_max(&st, 1, 0).unwrap() - 1.0).abs() < 1e-13);
        let n = 20.0;
        let st = state(32, |_| 0.0, |x| libm::sin(n * x) / (n * n));
        assert!((second_derivative_max(&st, 1, 0).unwrap() - 1.0).abs() < 1e-12);
    }
}
