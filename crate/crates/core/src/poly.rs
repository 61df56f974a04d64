//! Sparse multivariate polynomials in the state components, polynomial
//! matrices and small dense matrices.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

/// Polynomial in `nvars` variables: exponent tuple → coefficient.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate polynomial `U_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1.0);
        p
    }

    /// Builds a polynomial from a monomial list; repeated monomials are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidSystem(alloc::format!(
                    "monomial has {} exponents, expected {nvars}",
                    e.len()
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidSystem("non-finite polynomial coefficient".into()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            let key: Vec<Vec<u32>> = self.terms.iter().filter(|(_, v)| **v == 0.0).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.terms.iter().map(|(e, &c)| e.iter().zip(u).fold(c, |acc, (&k, &x)| acc * libm::pow(x, k as f64))).sum()
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.get(&vec![0; self.nvars]).copied().unwrap_or(0.0)
    }

    /// `p - p(0)`.
    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&vec![0; self.nvars]);
        p
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            p.add_term(e.clone(), a * c);
        }
        p
    }

    /// Every coefficient of `self - other` is at most `tol` in magnitude.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).terms.values().all(|c| libm::fabs(*c) <= tol)
    }

    /// Human-readable form such as `1 + eta - u^2`.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, &c)) in self.terms.iter().enumerate() {
            let is_const = e.iter().all(|&k| k == 0);
            let mag = libm::fabs(c);
            if i == 0 {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if is_const || mag != 1.0 {
                factors.push(alloc::format!("{mag}"));
            }
            for (v, &k) in e.iter().enumerate() {
                let name = names.get(v).copied().unwrap_or("?");
                match k {
                    0 => {}
                    1 => factors.push(name.into()),
                    _ => factors.push(alloc::format!("{name}^{k}")),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, &c) in &rhs.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, &c) in &rhs.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scaled(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }
}

/// Small dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    /// `max_ij |M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max(libm::fabs(self.get(i, j) - self.get(j, i)));
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(libm::fabs(*v)))
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)));
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }
}

/// Square matrix of polynomials in the state components.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(n: usize, nvars: usize) -> Self {
        Self { n, entries: vec![Poly::zero(nvars); n * n] }
    }

    pub fn from_constant(m: &Matrix, nvars: usize) -> Self {
        let n = m.size();
        let mut out = Self::zeros(n, nvars);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, Poly::constant(nvars, m.get(i, j)));
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.entries.first().map_or(0, Poly::nvars)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn eval(&self, u: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).eval(u));
            }
        }
        m
    }

    /// Constant part `P(0)`.
    pub fn at_origin(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).constant_term());
            }
        }
        m
    }

    /// Varying part `P(U) - P(0)`.
    pub fn varying_part(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(Poly::without_constant).collect() }
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        let n = self.n;
        let mut out = Self::zeros(n, self.nvars());
        for i in 0..n {
            for j in 0..n {
                let mut acc = Poly::zero(self.nvars());
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, rhs: &PolyMatrix) -> PolyMatrix {
        Self { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> PolyMatrix {
        Self { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &PolyMatrix, tol: f64) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().map(Poly::degree).max().unwrap_or(0)
    }
}
