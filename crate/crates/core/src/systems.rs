//! Quasilinear systems `∂_t U + Σ_j A_j(U) ∂_j U = 0` with polynomial
//! coefficient matrices, the Saint-Venant systems, and executable checks of
//! the structural assumptions (polynomial entries, Friedrichs symmetrizer,
//! symmetrizer compatibility, Hamiltonian factorization).

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::poly::{Matrix, Poly, PolyMatrix};
use crate::spectral::StateField;
use crate::{Error, Result};

/// Which energy structure a symmetrizer encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyVariant {
    /// Block-diagonal `diag(1, (1+η)Id)` type symmetrizer.
    Standard,
    /// Hessian of a Hamiltonian; pairs with a factorization `A_j = S_j^0 S(U)`.
    Hamiltonian,
}

impl EnergyVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            EnergyVariant::Standard => "standard",
            EnergyVariant::Hamiltonian => "hamiltonian",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrizer {
    pub variant: EnergyVariant,
    pub matrix: PolyMatrix,
    /// Name of the predicate describing where the symmetrizer is positive definite.
    pub domain: String,
}

/// Named scalar polynomial that must stay positive (hyperbolicity domain).
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub name: String,
    pub poly: Poly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemDef {
    name: String,
    dim: usize,
    var_names: Vec<String>,
    flux: Vec<PolyMatrix>,
    flux_constant: Vec<Matrix>,
    flux_varying: Vec<PolyMatrix>,
    symmetrizers: Vec<Symmetrizer>,
    factorization: Option<Vec<Matrix>>,
    predicates: Vec<Predicate>,
}

impl SystemDef {
    /// Validates shapes and splits every `A_j` into `A_j(0) + A_j^1(U)`.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        var_names: Vec<String>,
        flux: Vec<PolyMatrix>,
        symmetrizers: Vec<Symmetrizer>,
        factorization: Option<Vec<Matrix>>,
        predicates: Vec<Predicate>,
    ) -> Result<Self> {
        let n = var_names.len();
        let invalid = |msg: String| Err(Error::InvalidSystem(msg));
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if n == 0 {
            return invalid("system needs at least one state component".into());
        }
        if flux.len() != dim {
            return invalid(alloc::format!("expected {dim} flux matrices, found {}", flux.len()));
        }
        for (j, a) in flux.iter().enumerate() {
            if a.size() != n || a.nvars() != n {
                return invalid(alloc::format!("flux matrix {} is not {n}x{n} in {n} variables", j + 1));
            }
        }
        for s in &symmetrizers {
            if s.matrix.size() != n || s.matrix.nvars() != n {
                return invalid(alloc::format!("{} symmetrizer is not {n}x{n}", s.variant.as_str()));
            }
            if !predicates.iter().any(|p| p.name == s.domain) {
                return invalid(alloc::format!(
                    "{} symmetrizer refers to unknown predicate `{}`",
                    s.variant.as_str(),
                    s.domain
                ));
            }
        }
        if let Some(f) = &factorization {
            if f.len() != dim || f.iter().any(|m| m.size() != n) {
                return invalid("factorization needs one n x n constant matrix per axis".into());
            }
        }
        for p in &predicates {
            if p.poly.nvars() != n {
                return invalid(alloc::format!("predicate `{}` is not a polynomial in {n} variables", p.name));
            }
        }
        let flux_constant = flux.iter().map(PolyMatrix::at_origin).collect();
        let flux_varying = flux.iter().map(PolyMatrix::varying_part).collect();
        Ok(Self {
            name: name.into(),
            dim,
            var_names,
            flux,
            flux_constant,
            flux_varying,
            symmetrizers,
            factorization,
            predicates,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of state components `n`.
    pub fn size(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    /// `A_j(U)`.
    pub fn flux(&self, axis: usize) -> &PolyMatrix {
        &self.flux[axis]
    }

    /// `A_j^0 = A_j(0)`.
    pub fn flux_constant(&self, axis: usize) -> &Matrix {
        &self.flux_constant[axis]
    }

    /// `A_j^1(U) = A_j(U) - A_j^0`.
    pub fn flux_varying(&self, axis: usize) -> &PolyMatrix {
        &self.flux_varying[axis]
    }

    pub fn symmetrizers(&self) -> &[Symmetrizer] {
        &self.symmetrizers
    }

    /// The first registered symmetrizer.
    pub fn symmetrizer(&self) -> Option<&Symmetrizer> {
        self.symmetrizers.first()
    }

    pub fn symmetrizer_for(&self, variant: EnergyVariant) -> Option<&Symmetrizer> {
        self.symmetrizers.iter().find(|s| s.variant == variant)
    }

    /// Constant matrices `S_j^0` of the factorization `A_j = S_j^0 S(U)`.
    pub fn factorization(&self) -> Option<&[Matrix]> {
        self.factorization.as_deref()
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    /// Highest total degree over all flux entries.
    pub fn degree(&self) -> u32 {
        self.flux.iter().map(PolyMatrix::degree).max().unwrap_or(0)
    }

    /// Whether the components read as `(η, velocity)`: `n = d + 1`.
    pub fn is_shallow_water_shaped(&self) -> bool {
        self.size() == self.dim + 1
    }

    /// `A_j(U)` evaluated at a point.
    pub fn eval_flux(&self, axis: usize, u: &[f64]) -> Matrix {
        self.flux[axis].eval(u)
    }
}

/// Entrywise evaluation of a polynomial matrix.
pub fn eval_matrix(p: &PolyMatrix, u: &[f64]) -> Matrix {
    p.eval(u)
}

fn depth(nvars: usize) -> Poly {
    &Poly::constant(nvars, 1.0) + &Poly::var(nvars, 0)
}

fn surface_predicates(nvars: usize, standard: bool, hamiltonian: bool) -> Vec<Predicate> {
    let mut out = Vec::new();
    if standard {
        out.push(Predicate { name: "U".into(), poly: depth(nvars) });
    }
    if hamiltonian {
        let mut p = depth(nvars);
        for i in 1..nvars {
            let v = Poly::var(nvars, i);
            p = &p - &(&v * &v);
        }
        out.push(Predicate { name: "UH".into(), poly: p });
    }
    out
}

/// `S = diag(1, (1+η)Id)`.
fn standard_symmetrizer(nvars: usize) -> PolyMatrix {
    let mut s = PolyMatrix::zeros(nvars, nvars);
    s.set(0, 0, Poly::constant(nvars, 1.0));
    for i in 1..nvars {
        s.set(i, i, depth(nvars));
    }
    s
}

/// `S_H = [[1, uᵀ], [u, (1+η)Id]]`.
fn hamiltonian_symmetrizer(nvars: usize) -> PolyMatrix {
    let mut s = standard_symmetrizer(nvars);
    for i in 1..nvars {
        s.set(0, i, Poly::var(nvars, i));
        s.set(i, 0, Poly::var(nvars, i));
    }
    s
}

/// `S_j^0 = [[0, e_jᵀ], [e_j, 0]]`.
fn hamiltonian_factor(nvars: usize, axis: usize) -> Matrix {
    let mut m = Matrix::zeros(nvars);
    m.set(0, axis + 1, 1.0);
    m.set(axis + 1, 0, 1.0);
    m
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// One-dimensional Saint-Venant system in `(η, u)`.
///
/// The standard and Hamiltonian formulations coincide in 1D, so both
/// symmetrizers and both hyperbolicity predicates are registered; the
/// Hamiltonian one comes first.
pub fn saint_venant_1d() -> SystemDef {
    let n = 2;
    let u = Poly::var(n, 1);
    let mut a = PolyMatrix::zeros(n, n);
    a.set(0, 0, u.clone());
    a.set(0, 1, depth(n));
    a.set(1, 0, Poly::constant(n, 1.0));
    a.set(1, 1, u);
    SystemDef::new(
        "saint-venant-1d",
        1,
        names(&["eta", "u"]),
        vec![a],
        vec![
            Symmetrizer {
                variant: EnergyVariant::Hamiltonian,
                matrix: hamiltonian_symmetrizer(n),
                domain: "UH".into(),
            },
            Symmetrizer { variant: EnergyVariant::Standard, matrix: standard_symmetrizer(n), domain: "U".into() },
        ],
        Some(vec![hamiltonian_factor(n, 0)]),
        surface_predicates(n, true, true),
    )
    .expect("built-in system is well formed")
}

/// Two-dimensional Saint-Venant system with advection `(u·∇)u`.
pub fn saint_venant_2d_standard() -> SystemDef {
    let n = 3;
    let flux = (0..2)
        .map(|j| {
            let uj = Poly::var(n, j + 1);
            let mut a = PolyMatrix::zeros(n, n);
            a.set(0, 0, uj.clone());
            a.set(0, j + 1, depth(n));
            a.set(j + 1, 0, Poly::constant(n, 1.0));
            a.set(1, 1, uj.clone());
            a.set(2, 2, uj);
            a
        })
        .collect();
    SystemDef::new(
        "saint-venant-2d-standard",
        2,
        names(&["eta", "u", "v"]),
        flux,
        vec![Symmetrizer { variant: EnergyVariant::Standard, matrix: standard_symmetrizer(n), domain: "U".into() }],
        None,
        surface_predicates(n, true, false),
    )
    .expect("built-in system is well formed")
}

/// Two-dimensional Saint-Venant system with `½∇|u|²`, which has a
/// Hamiltonian structure.
pub fn saint_venant_2d_hamiltonian() -> SystemDef {
    let n = 3;
    let flux = (0..2)
        .map(|j| {
            let mut a = PolyMatrix::zeros(n, n);
            a.set(0, 0, Poly::var(n, j + 1));
            a.set(0, j + 1, depth(n));
            a.set(j + 1, 0, Poly::constant(n, 1.0));
            a.set(j + 1, 1, Poly::var(n, 1));
            a.set(j + 1, 2, Poly::var(n, 2));
            a
        })
        .collect();
    SystemDef::new(
        "saint-venant-2d-hamiltonian",
        2,
        names(&["eta", "u", "v"]),
        flux,
        vec![Symmetrizer {
            variant: EnergyVariant::Hamiltonian,
            matrix: hamiltonian_symmetrizer(n),
            domain: "UH".into(),
        }],
        Some(vec![hamiltonian_factor(n, 0), hamiltonian_factor(n, 1)]),
        surface_predicates(n, false, true),
    )
    .expect("built-in system is well formed")
}

/// Built-in system by name.
pub fn builtin(name: &str) -> Option<SystemDef> {
    match name {
        "saint-venant-1d" => Some(saint_venant_1d()),
        "saint-venant-2d-standard" => Some(saint_venant_2d_standard()),
        "saint-venant-2d-hamiltonian" => Some(saint_venant_2d_hamiltonian()),
        _ => None,
    }
}

pub const BUILTIN_SYSTEMS: [&str; 3] = ["saint-venant-1d", "saint-venant-2d-standard", "saint-venant-2d-hamiltonian"];

// ---------------------------------------------------------------------------
// Structural checks

/// Tolerance for the pointwise symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Coefficient tolerance for exact polynomial identities.
pub const IDENTITY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `S(U)` is not symmetric.
    SymmetrizerAsymmetric { variant: EnergyVariant, asymmetry: f64 },
    /// Smallest eigenvalue of `S(U)` is not positive.
    NotPositiveDefinite { variant: EnergyVariant, min_eigenvalue: f64 },
    /// `S(U) A_j(U)` is not symmetric.
    ProductAsymmetric { variant: EnergyVariant, axis: usize, asymmetry: f64 },
    /// Compatibility condition 1..=3 fails on `axis`.
    Compatibility { variant: EnergyVariant, condition: u8, axis: usize, asymmetry: f64 },
    /// `S_j^0` is not symmetric.
    FactorAsymmetric { axis: usize },
    /// `A_j - S_j^0 S` has a coefficient above tolerance.
    FactorizationMismatch { axis: usize, max_coefficient: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// Offending state value; empty for polynomial-identity failures.
    pub point: Vec<f64>,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub assumption: &'static str,
    pub samples_checked: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Entries are polynomial by construction; reports the degree.
pub fn check_polynomial(sys: &SystemDef) -> (CheckReport, u32) {
    (CheckReport { assumption: "A.1", samples_checked: 0, failures: Vec::new() }, sys.degree())
}

fn scaled_tol(m: &Matrix) -> f64 {
    SYMMETRY_TOL * m.max_abs().max(1.0)
}

fn selected(sys: &SystemDef, variant: Option<EnergyVariant>) -> Result<Vec<&Symmetrizer>> {
    let list: Vec<&Symmetrizer> = sys.symmetrizers.iter().filter(|s| variant.is_none_or(|v| s.variant == v)).collect();
    if list.is_empty() {
        return Err(Error::MissingSymmetrizer(variant.map_or("Friedrichs", EnergyVariant::as_str)));
    }
    Ok(list)
}

/// Friedrichs symmetrizer check at every sample, for every registered symmetrizer.
pub fn check_symmetrizer(sys: &SystemDef, samples: &[Vec<f64>]) -> Result<CheckReport> {
    symmetrizer_report(sys, None, samples)
}

/// [`check_symmetrizer`] restricted to one symmetrizer.
pub fn check_symmetrizer_variant(sys: &SystemDef, variant: EnergyVariant, samples: &[Vec<f64>]) -> Result<CheckReport> {
    symmetrizer_report(sys, Some(variant), samples)
}

fn symmetrizer_report(sys: &SystemDef, variant: Option<EnergyVariant>, samples: &[Vec<f64>]) -> Result<CheckReport> {
    let syms = selected(sys, variant)?;
    let mut failures = Vec::new();
    for u in samples {
        for s in &syms {
            let sm = s.matrix.eval(u);
            let asym = sm.asymmetry();
            if asym > scaled_tol(&sm) {
                failures.push(Failure {
                    point: u.clone(),
                    violation: Violation::SymmetrizerAsymmetric { variant: s.variant, asymmetry: asym },
                });
            }
            let min_eig = sm.symmetric_eigenvalues()[0];
            if !(min_eig > 0.0) {
                failures.push(Failure {
                    point: u.clone(),
                    violation: Violation::NotPositiveDefinite { variant: s.variant, min_eigenvalue: min_eig },
                });
            }
            for j in 0..sys.dim {
                let prod = sm.mul(&sys.flux[j].eval(u));
                let asym = prod.asymmetry();
                if asym > scaled_tol(&prod) {
                    failures.push(Failure {
                        point: u.clone(),
                        violation: Violation::ProductAsymmetric { variant: s.variant, axis: j, asymmetry: asym },
                    });
                }
            }
        }
    }
    Ok(CheckReport { assumption: "S.1", samples_checked: samples.len(), failures })
}

/// Symmetry of `S⁰A_j⁰`, `S⁰A_j¹(U) + S¹(U)A_j⁰` and `S¹(U)A_j¹(U)`.
pub fn check_compatibility(sys: &SystemDef, samples: &[Vec<f64>]) -> Result<CheckReport> {
    compatibility_report(sys, None, samples)
}

/// [`check_compatibility`] restricted to one symmetrizer.
pub fn check_compatibility_variant(
    sys: &SystemDef,
    variant: EnergyVariant,
    samples: &[Vec<f64>],
) -> Result<CheckReport> {
    compatibility_report(sys, Some(variant), samples)
}

fn compatibility_report(sys: &SystemDef, variant: Option<EnergyVariant>, samples: &[Vec<f64>]) -> Result<CheckReport> {
    let syms = selected(sys, variant)?;
    let mut failures = Vec::new();
    for s in syms {
        let s0 = s.matrix.at_origin();
        let s1 = s.matrix.varying_part();
        for j in 0..sys.dim {
            let a0 = &sys.flux_constant[j];
            let first = s0.mul(a0);
            if first.asymmetry() > scaled_tol(&first) {
                failures.push(Failure {
                    point: Vec::new(),
                    violation: Violation::Compatibility {
                        variant: s.variant,
                        condition: 1,
                        axis: j,
                        asymmetry: first.asymmetry(),
                    },
                });
            }
            for u in samples {
                let a1 = sys.flux_varying[j].eval(u);
                let s1u = s1.eval(u);
                let second = s0.mul(&a1).add(&s1u.mul(a0));
                let third = s1u.mul(&a1);
                for (condition, m) in [(2u8, second), (3u8, third)] {
                    if m.asymmetry() > scaled_tol(&m) {
                        failures.push(Failure {
                            point: u.clone(),
                            violation: Violation::Compatibility {
                                variant: s.variant,
                                condition,
                                axis: j,
                                asymmetry: m.asymmetry(),
                            },
                        });
                    }
                }
            }
        }
    }
    Ok(CheckReport { assumption: "AS", samples_checked: samples.len(), failures })
}

/// Exact coefficient check of `A_j(U) = S_j^0 S(U)` against the Hamiltonian
/// symmetrizer (or the first one if none is tagged Hamiltonian).
///
/// Returns `None` when the system registers no factorization.
pub fn check_factorization(sys: &SystemDef) -> Option<CheckReport> {
    let factors = sys.factorization.as_ref()?;
    let s = sys.symmetrizer_for(EnergyVariant::Hamiltonian).or_else(|| sys.symmetrizer())?;
    let mut failures = Vec::new();
    for (j, sj0) in factors.iter().enumerate() {
        if sj0.asymmetry() > 0.0 {
            failures.push(Failure { point: Vec::new(), violation: Violation::FactorAsymmetric { axis: j } });
        }
        let product = PolyMatrix::from_constant(sj0, sys.size()).mul(&s.matrix);
        let diff = sys.flux[j].sub(&product);
        if !diff.approx_eq(&PolyMatrix::zeros(sys.size(), sys.size()), IDENTITY_TOL) {
            let mut worst = 0.0f64;
            for r in 0..sys.size() {
                for c in 0..sys.size() {
                    for (_, coef) in diff.get(r, c).terms() {
                        worst = worst.max(libm::fabs(coef));
                    }
                }
            }
            failures.push(Failure {
                point: Vec::new(),
                violation: Violation::FactorizationMismatch { axis: j, max_coefficient: worst },
            });
        }
    }
    Some(CheckReport { assumption: "A2", samples_checked: 0, failures })
}

// ---------------------------------------------------------------------------
// Sample points

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
        if f < 1e-300 {
            inv = 0.0;
            f = inv;
        }
    }
    r
}

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Axis-aligned box of state values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SampleBox {
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Self {
        Self { lower: vec![lower; n], upper: vec![upper; n] }
    }
}

/// Deterministic Halton points in `bounds`, keeping only those where every
/// listed predicate is positive. Stops after `count` accepted points or
/// `50 · count` draws.
pub fn halton_samples(bounds: &SampleBox, count: usize, keep: &[&Poly]) -> Vec<Vec<f64>> {
    let n = bounds.lower.len();
    assert!(n <= HALTON_BASES.len(), "at most {} components supported", HALTON_BASES.len());
    let mut out = Vec::with_capacity(count);
    for i in 1..=(50 * count as u64) {
        if out.len() == count {
            break;
        }
        let p: Vec<f64> = (0..n)
            .map(|d| {
                let t = radical_inverse(i, HALTON_BASES[d]);
                bounds.lower[d] + t * (bounds.upper[d] - bounds.lower[d])
            })
            .collect();
        if keep.iter().all(|q| q.eval(&p) > 0.0) {
            out.push(p);
        }
    }
    out
}

/// Default sample set for `sys`: 200 Halton points in `bounds` inside every
/// symmetrizer's domain predicate.
pub fn default_samples(sys: &SystemDef, bounds: &SampleBox) -> Vec<Vec<f64>> {
    let keep: Vec<&Poly> = sys.symmetrizers.iter().filter_map(|s| sys.predicate(&s.domain).map(|p| &p.poly)).collect();
    halton_samples(bounds, 200, &keep)
}

/// 200 Halton points in `bounds` inside the domain predicate of one symmetrizer.
pub fn domain_samples(sys: &SystemDef, variant: EnergyVariant, bounds: &SampleBox) -> Result<Vec<Vec<f64>>> {
    let s = sys.symmetrizer_for(variant).ok_or(Error::MissingSymmetrizer(variant.as_str()))?;
    let keep: Vec<&Poly> = sys.predicate(&s.domain).map(|p| &p.poly).into_iter().collect();
    Ok(halton_samples(bounds, 200, &keep))
}

// ---------------------------------------------------------------------------
// Field diagnostics

/// Minimum of each predicate over the collocation points, in registration order.
pub fn hyperbolicity_margin(sys: &SystemDef, state: &StateField) -> Result<Vec<(String, f64)>> {
    if state.len() != sys.size() {
        return Err(Error::ComponentMismatch { expected: sys.size(), got: state.len() });
    }
    let phys: Vec<Vec<f64>> = state.components().iter().map(|c| c.physical()).collect();
    let mut point = vec![0.0; sys.size()];
    let mut mins = vec![f64::INFINITY; sys.predicates.len()];
    for x in 0..state.grid().len() {
        for (c, p) in phys.iter().enumerate() {
            point[c] = p[x];
        }
        for (m, pred) in mins.iter_mut().zip(&sys.predicates) {
            *m = m.min(pred.poly.eval(&point));
        }
    }
    Ok(sys.predicates.iter().map(|p| p.name.clone()).zip(mins).collect())
}

/// `½∫ η² + (1+η)|u|² dx` by collocation quadrature; exact for dealiased states.
pub fn hamiltonian_energy(state: &StateField) -> Result<f64> {
    let dim = state.grid().dim();
    if state.len() != dim + 1 {
        return Err(Error::ComponentMismatch { expected: dim + 1, got: state.len() });
    }
    let phys: Vec<Vec<f64>> = state.components().iter().map(|c| c.physical()).collect();
    let mut total = 0.0;
    for x in 0..state.grid().len() {
        let eta = phys[0][x];
        let speed2: f64 = phys[1..].iter().map(|p| p[x] * p[x]).sum();
        total += eta * eta + (1.0 + eta) * speed2;
    }
    Ok(0.5 * total * state.grid().cell_volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saint_venant_1d_flux_values() {
        let sys = saint_venant_1d();
        assert_eq!(sys.eval_flux(0, &[0.0, 0.0]), Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let a = sys.eval_flux(0, &[0.5, 0.2]);
        assert_eq!(a, Matrix::from_rows(&[&[0.2, 1.5], &[1.0, 0.2]]));
        assert!(eval_matrix(&PolyMatrix::zeros(2, 2), &[3.0, -1.0]).is_zero());
    }

    #[test]
    fn constant_and_varying_split_is_exact() {
        for sys in BUILTIN_SYSTEMS.iter().map(|n| builtin(n).unwrap()) {
            for j in 0..sys.dim() {
                let rebuilt = PolyMatrix::from_constant(sys.flux_constant(j), sys.size()).add(sys.flux_varying(j));
                assert_eq!(&rebuilt, sys.flux(j));
                assert_eq!(sys.flux_varying(j).at_origin(), Matrix::zeros(sys.size()));
            }
        }
    }

    #[test]
    fn symmetrizers_at_origin_are_identity() {
        for sys in BUILTIN_SYSTEMS.iter().map(|n| builtin(n).unwrap()) {
            for s in sys.symmetrizers() {
                assert_eq!(s.matrix.at_origin(), Matrix::identity(sys.size()));
            }
        }
    }

    #[test]
    fn factorizations_are_exact_polynomial_identities() {
        for sys in [saint_venant_1d(), saint_venant_2d_hamiltonian()] {
            let report = check_factorization(&sys).unwrap();
            assert!(report.passed(), "{:?}", report.failures);
        }
        assert!(check_factorization(&saint_venant_2d_standard()).is_none());
    }

    #[test]
    fn factorization_mismatch_is_reported() {
        let good = saint_venant_1d();
        let mut flux = good.flux(0).clone();
        flux.set(1, 1, Poly::var(2, 0));
        let bad = SystemDef::new(
            "bad",
            1,
            good.var_names().to_vec(),
            vec![flux],
            good.symmetrizers().to_vec(),
            good.factorization().map(|f| f.to_vec()),
            good.predicates().to_vec(),
        )
        .unwrap();
        let report = check_factorization(&bad).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert!(matches!(report.failures[0].violation, Violation::FactorizationMismatch { axis: 0, .. }));
    }

    #[test]
    fn hamiltonian_2d_standard_matrices() {
        let sys = saint_venant_2d_standard();
        let a1 = sys.eval_flux(0, &[0.0, 0.0, 0.0]);
        assert_eq!(a1, Matrix::from_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]));
        let margin = sys.predicate("U").unwrap().poly.eval(&[-1.1, 0.0, 0.0]);
        assert!(margin < 0.0);
    }

    #[test]
    fn hamiltonian_symmetrizer_definiteness() {
        let sys = saint_venant_2d_hamiltonian();
        let s = &sys.symmetrizer().unwrap().matrix;
        let ev = s.eval(&[0.0, 0.0, 0.0]).symmetric_eigenvalues();
        assert!(ev.iter().all(|e| (e - 1.0).abs() < 1e-14));
        // 1 + η - |u|² = 1 - 1.28 = -0.28 < 0
        let ev = s.eval(&[0.0, 0.8, 0.8]).symmetric_eigenvalues();
        assert!(ev[0] < 0.0);
    }

    #[test]
    fn symmetrizer_check_flags_bad_points() {
        let sys = saint_venant_2d_standard();
        let report = check_symmetrizer(&sys, &[vec![-1.5, 0.1, 0.2]]).unwrap();
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f.violation, Violation::NotPositiveDefinite { .. }) && f.point == [-1.5, 0.1, 0.2]));

        let ham = saint_venant_2d_hamiltonian();
        let report = check_symmetrizer(&ham, &[vec![0.0, 0.8, 0.8]]).unwrap();
        assert!(!report.passed());
        let report = check_symmetrizer(&ham, &[vec![0.0, 0.3, -0.2]]).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn compatibility_counterexample_localizes_third_condition() {
        // A = [[0, a], [a, 0]] (A^0 = 0), S = Id + diag(a, 0): S¹A¹ = [[0, a²], [0, 0]].
        let n = 2;
        let a = Poly::var(n, 0);
        let mut flux = PolyMatrix::zeros(n, n);
        flux.set(0, 1, a.clone());
        flux.set(1, 0, a.clone());
        let mut s = PolyMatrix::from_constant(&Matrix::identity(n), n);
        s.set(0, 0, &Poly::constant(n, 1.0) + &a);
        let sys = SystemDef::new(
            "counterexample",
            1,
            names(&["a", "b"]),
            vec![flux],
            vec![Symmetrizer { variant: EnergyVariant::Standard, matrix: s, domain: "all".into() }],
            None,
            vec![Predicate { name: "all".into(), poly: Poly::constant(n, 1.0) }],
        )
        .unwrap();
        let report = check_compatibility(&sys, &[vec![0.3, 0.0], vec![-0.7, 1.0]]).unwrap();
        assert_eq!(report.failures.len(), 2);
        assert!(report.failures.iter().all(|f| matches!(f.violation, Violation::Compatibility { condition: 3, .. })));
    }

    #[test]
    fn zero_system_is_compatible() {
        let n = 2;
        let sys = SystemDef::new(
            "zero",
            1,
            names(&["a", "b"]),
            vec![PolyMatrix::zeros(n, n)],
            vec![Symmetrizer {
                variant: EnergyVariant::Standard,
                matrix: PolyMatrix::from_constant(&Matrix::identity(n), n),
                domain: "all".into(),
            }],
            None,
            vec![Predicate { name: "all".into(), poly: Poly::constant(n, 1.0) }],
        )
        .unwrap();
        let samples = halton_samples(&SampleBox::uniform(n, -1.0, 1.0), 20, &[]);
        assert!(check_compatibility(&sys, &samples).unwrap().passed());
        assert!(check_symmetrizer(&sys, &samples).unwrap().passed());
    }

    #[test]
    fn missing_symmetrizer_is_an_error() {
        let sys =
            SystemDef::new("bare", 1, names(&["a"]), vec![PolyMatrix::zeros(1, 1)], vec![], None, vec![]).unwrap();
        assert_eq!(check_symmetrizer(&sys, &[]).unwrap_err(), Error::MissingSymmetrizer("Friedrichs"));
        assert!(check_compatibility(&sys, &[]).is_err());
    }

    #[test]
    fn halton_samples_are_deterministic_and_filtered() {
        let sys = saint_venant_1d();
        let bounds = SampleBox::uniform(2, -0.95, 1.5);
        let a = default_samples(&sys, &bounds);
        let b = default_samples(&sys, &bounds);
        assert_eq!(a.len(), 200);
        assert_eq!(a, b);
        for p in &a {
            assert!(1.0 + p[0] - p[1] * p[1] > 0.0);
        }
    }

    #[test]
    fn hamiltonian_domain_is_inside_standard_domain() {
        let sys = saint_venant_1d();
        let uh = &sys.predicate("UH").unwrap().poly;
        let u = &sys.predicate("U").unwrap().poly;
        for p in halton_samples(&SampleBox::uniform(2, -3.0, 3.0), 500, &[uh]) {
            assert!(u.eval(&p) > 0.0);
        }
    }

    #[test]
    fn invalid_definitions_are_rejected() {
        let err = SystemDef::new("x", 3, names(&["a"]), vec![], vec![], None, vec![]).unwrap_err();
        assert_eq!(err, Error::UnsupportedDimension(3));
        let err = SystemDef::new("x", 1, names(&["a"]), vec![], vec![], None, vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidSystem(_)));
    }
}
