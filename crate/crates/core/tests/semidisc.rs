mod common;

use common::*;
use proptest::prelude::*;
use quasispec::semidisc::rhs;
use quasispec::systems::{saint_venant_1d, saint_venant_2d_hamiltonian, saint_venant_2d_standard};
use quasispec::{FilterSpec, Grid, Poly, PolyMatrix, SchemeKind, SchemeSpec, SpectralField, StateField, SystemDef};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn poly_series(p: &Poly, comps: &[Series]) -> Series {
    let mut out = Series::new();
    for (exps, coef) in p.terms() {
        let mut term = constant(coef);
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = convolve(&term, &comps[i]);
            }
        }
        out = add(&out, &term, 1.0);
    }
    out
}

fn filtered(a: &Series, filter: &FilterSpec, dim: usize) -> Series {
    a.iter()
        .map(|(k, c)| {
            let s = if dim == 1 { filter.symbol(&[k.0]) } else { filter.symbol(&[k.0, k.1]) };
            (*k, c * s)
        })
        .filter(|(_, c)| c.norm() > 0.0)
        .collect()
}

/// Right-hand side assembled from exact convolutions.
fn oracle_rhs(kind: SchemeKind, sys: &SystemDef, state: &StateField) -> Vec<Series> {
    let dim = sys.dim();
    let grid = state.grid();
    let n = grid.dealias_cutoff();
    let comps: Vec<Series> = state.components().iter().map(series_of).collect();
    let filter = match kind {
        SchemeKind::SharpAll => FilterSpec::sharp(n),
        _ => FilterSpec::smooth(n),
    };
    (0..sys.size())
        .map(|r| {
            let mut linear = Series::new();
            let mut varying = Series::new();
            for j in 0..dim {
                let a = sys.flux(j);
                for (c, comp) in comps.iter().enumerate() {
                    let d = derivative(comp, j);
                    let entry = a.get(r, c);
                    let lin = entry.constant_term();
                    linear = add(&linear, &d, lin);
                    varying = add(&varying, &convolve(&poly_series(&entry.without_constant(), &comps), &d), 1.0);
                }
            }
            let total = match kind {
                SchemeKind::SmoothNonlinearOnly => add(&linear, &filtered(&varying, &filter, dim), 1.0),
                _ => filtered(&add(&linear, &varying, 1.0), &filter, dim),
            };
            total.iter().map(|(k, c)| (*k, -c)).collect()
        })
        .collect()
}

fn random_state(sys: &SystemDef, half: usize, radius: usize, amp: f64, seed: u64) -> StateField {
    let g = Grid::new(sys.dim(), half).unwrap();
    let mut rng = StdRng::seed_from_u64(seed);
    StateField::new(
        (0..sys.size())
            .map(|_| {
                let mut f = random_field(&g, radius, &mut rng);
                f.scale(amp);
                f
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn rhs_matches_convolution_oracle_for_every_scheme() {
    let systems = [saint_venant_1d(), saint_venant_2d_standard(), saint_venant_2d_hamiltonian()];
    let mut worst = 0.0f64;
    for (i, sys) in systems.iter().enumerate() {
        for half in [4usize, 8, 16] {
            let n = Grid::new(sys.dim(), half).unwrap().dealias_cutoff();
            let u = random_state(sys, half, n, 0.3, 100 * i as u64 + half as u64);
            for kind in SchemeKind::ALL {
                let got = rhs(&SchemeSpec::new(kind), sys, &u).unwrap();
                let exact = oracle_rhs(kind, sys, &u);
                for (g, e) in got.components().iter().zip(&exact) {
                    let rel = max_difference(&series_of(g), e) / max_norm(e).max(1e-300);
                    worst = worst.max(rel);
                    assert!(rel < 1e-11, "{} M = {half} {}: {rel:.3e}", sys.name(), kind.name());
                }
            }
        }
    }
    println!("rhs vs convolution oracle: worst relative difference {worst:.3e}");
}

/// Synthetic symmetric system `A(U) = [[u, 1], [1, u]]` on `U = (w, u)`.
fn symmetric_system() -> SystemDef {
    let mut a = PolyMatrix::zeros(2, 2);
    a.set(0, 0, Poly::var(2, 1));
    a.set(0, 1, Poly::constant(2, 1.0));
    a.set(1, 0, Poly::constant(2, 1.0));
    a.set(1, 1, Poly::var(2, 1));
    SystemDef::new("symmetric", 1, vec!["w".into(), "u".into()], vec![a], vec![], None, vec![]).unwrap()
}

#[test]
fn energy_identity_on_single_mode_states() {
    // <P_N(A(U) ∂U), U> = -1/2 <(∂A) U, U> for symmetric A.
    let sys = symmetric_system();
    let g = Grid::new(1, 32).unwrap();
    for (p, q, a, b) in [(1, 2, 0.7, 0.4), (3, 1, -0.2, 0.9), (5, 4, 0.5, 0.5), (2, 2, 1.0, -0.3)] {
        let w = SpectralField::from_function(&g, |x| a * (p as f64 * x[0]).sin()).unwrap();
        let u = SpectralField::from_function(&g, |x| b * (q as f64 * x[0]).cos() + 0.1 * (2.0 * x[0]).sin()).unwrap();
        let state = StateField::new(vec![w, u]).unwrap();
        let r = rhs(&SchemeSpec::new(SchemeKind::SharpAll), &sys, &state).unwrap();
        let lhs = -r.l2_inner(&state).unwrap();

        let ws = series_of(state.component(0));
        let us = series_of(state.component(1));
        let ux = derivative(&us, 0);
        let energy = add(&convolve(&ws, &ws), &convolve(&us, &us), 1.0);
        let rhs_val = -0.5 * inner(&convolve(&ux, &energy), &constant(1.0), 1);
        println!("p = {p}, q = {q}: {lhs:.12e} vs {rhs_val:.12e}");
        assert!((lhs - rhs_val).abs() < 1e-11 * rhs_val.abs().max(1.0));
    }
}

#[test]
fn rhs_is_deterministic() {
    let sys = saint_venant_2d_hamiltonian();
    let u = random_state(&sys, 16, 10, 0.2, 5);
    for kind in SchemeKind::ALL {
        let a = rhs(&SchemeSpec::new(kind), &sys, &u).unwrap();
        let b = rhs(&SchemeSpec::new(kind), &sys, &u).unwrap();
        for (x, y) in a.components().iter().zip(b.components()) {
            assert_eq!(x.coeffs(), y.coeffs());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn output_is_supported_inside_the_cutoff_cube(which in 0usize..3, half in prop::sample::select(vec![4usize, 8, 16]), seed in any::<u64>(), scheme in 0usize..3) {
        let sys = [saint_venant_1d(), saint_venant_2d_standard(), saint_venant_2d_hamiltonian()][which].clone();
        let g = Grid::new(sys.dim(), half).unwrap();
        let n = g.dealias_cutoff() as i64;
        let u = random_state(&sys, half, n as usize, 0.5, seed);
        let r = rhs(&SchemeSpec::new(SchemeKind::ALL[scheme]), &sys, &u).unwrap();
        for c in r.components() {
            for (i, z) in c.coeffs().iter().enumerate() {
                let k = g.mode(i);
                if k[0].abs() > n || k[1].abs() > n {
                    prop_assert_eq!(z.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn rhs_of_real_state_is_real(which in 0usize..3, seed in any::<u64>(), scheme in 0usize..3) {
        let sys = [saint_venant_1d(), saint_venant_2d_standard(), saint_venant_2d_hamiltonian()][which].clone();
        let u = random_state(&sys, 8, 5, 0.5, seed);
        let r = rhs(&SchemeSpec::new(SchemeKind::ALL[scheme]), &sys, &u).unwrap();
        let g = u.grid();
        let dim = sys.dim();
        for c in r.components() {
            for i in 0..g.len() {
                let k = g.mode(i);
                let neg: Vec<i64> = k[..dim].iter().map(|&kj| if kj == g.half() as i64 { kj } else { -kj }).collect();
                let j = g.flat_index(&neg).unwrap();
                prop_assert!((c.coeffs()[i] - c.coeffs()[j].conj()).norm() <= 1e-14 * (1.0 + c.coeffs()[i].norm()));
            }
        }
    }
}
