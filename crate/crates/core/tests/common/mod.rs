//! Independent oracles shared by the integration tests. Nothing here goes
//! through the FFT path of the library.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use quasispec::{Complex64, Grid, SpectralField};
use rand::{Rng, RngExt};

/// Fourier coefficients keyed by `(kx, ky)` (`ky = 0` in 1D).
pub type Series = BTreeMap<(i64, i64), Complex64>;

pub fn series_of(f: &SpectralField) -> Series {
    let g = f.grid();
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| {
            let k = g.mode(i);
            ((k[0], k[1]), *c)
        })
        .collect()
}

pub fn convolve(a: &Series, b: &Series) -> Series {
    let mut out = Series::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            *out.entry((ka.0 + kb.0, ka.1 + kb.1)).or_default() += ca * cb;
        }
    }
    out
}

pub fn truncate(a: &Series, n: i64) -> Series {
    a.iter().filter(|(k, _)| k.0.abs() <= n && k.1.abs() <= n).map(|(k, c)| (*k, *c)).collect()
}

pub fn add(a: &Series, b: &Series, scale: f64) -> Series {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_default() += c * scale;
    }
    out
}

pub fn derivative(a: &Series, axis: usize) -> Series {
    a.iter()
        .map(|(k, c)| {
            let kj = if axis == 0 { k.0 } else { k.1 };
            (*k, c * Complex64::new(0.0, kj as f64))
        })
        .collect()
}

pub fn constant(c: f64) -> Series {
    let mut s = Series::new();
    s.insert((0, 0), Complex64::new(c, 0.0));
    s
}

/// `(2π)^d Σ a_k conj(b_k)`.
pub fn inner(a: &Series, b: &Series, dim: usize) -> f64 {
    let sum: f64 = a.iter().filter_map(|(k, ca)| b.get(k).map(|cb| (ca * cb.conj()).re)).sum();
    sum * (2.0 * PI).powi(dim as i32)
}

/// Largest coefficient difference over the union of both supports.
pub fn max_difference(a: &Series, b: &Series) -> f64 {
    let mut m = 0.0f64;
    for (k, c) in a {
        m = m.max((c - b.get(k).copied().unwrap_or_default()).norm());
    }
    for (k, c) in b {
        if !a.contains_key(k) {
            m = m.max(c.norm());
        }
    }
    m
}

pub fn max_norm(a: &Series) -> f64 {
    a.values().fold(0.0, |m, c| m.max(c.norm()))
}

/// Direct `O(n²)` discrete Fourier sum of samples at `Grid::points`.
pub fn naive_dft(grid: &Grid, samples: &[f64]) -> Series {
    let x = grid.points();
    let n = x.len();
    let m = grid.half() as i64;
    let ks: Vec<i64> = (-m + 1..=m).collect();
    let mut out = Series::new();
    if grid.dim() == 1 {
        for &k in &ks {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &xj) in x.iter().enumerate() {
                acc += samples[j] * Complex64::from_polar(1.0, -(k as f64) * xj);
            }
            out.insert((k, 0), acc / n as f64);
        }
    } else {
        for &kx in &ks {
            for &ky in &ks {
                let mut acc = Complex64::new(0.0, 0.0);
                for (ix, &xi) in x.iter().enumerate() {
                    for (iy, &yi) in x.iter().enumerate() {
                        let phase = -(kx as f64) * xi - (ky as f64) * yi;
                        acc += samples[ix * n + iy] * Complex64::from_polar(1.0, phase);
                    }
                }
                out.insert((kx, ky), acc / (n * n) as f64);
            }
        }
    }
    out
}

/// Direct evaluation of `Σ c_k e^{ik·x}` at `Grid::points`.
pub fn naive_inverse(grid: &Grid, series: &Series) -> Vec<f64> {
    let x = grid.points();
    let n = x.len();
    let mut out = Vec::new();
    if grid.dim() == 1 {
        for &xj in &x {
            let v: Complex64 = series.iter().map(|(k, c)| c * Complex64::from_polar(1.0, k.0 as f64 * xj)).sum();
            out.push(v.re);
        }
    } else {
        for ix in 0..n {
            for iy in 0..n {
                let v: Complex64 = series
                    .iter()
                    .map(|(k, c)| c * Complex64::from_polar(1.0, k.0 as f64 * x[ix] + k.1 as f64 * x[iy]))
                    .sum();
                out.push(v.re);
            }
        }
    }
    out
}

/// Real field with random coefficients on `max_j |k_j| ≤ radius`.
pub fn random_field<R: Rng>(grid: &Grid, radius: usize, rng: &mut R) -> SpectralField {
    let r = radius as i64;
    let coeffs = (0..grid.len())
        .map(|i| {
            let k = grid.mode(i);
            if k[0].abs() <= r && k[1].abs() <= r {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs).unwrap()
}

/// Real field from `(re, im)` pairs assigned to modes in FFT order.
pub fn field_from_values(grid: &Grid, radius: usize, values: &[(f64, f64)]) -> SpectralField {
    let r = radius as i64;
    let mut it = values.iter().cycle();
    let coeffs = (0..grid.len())
        .map(|i| {
            let k = grid.mode(i);
            if k[0].abs() <= r && k[1].abs() <= r {
                let (re, im) = it.next().copied().unwrap_or((0.0, 0.0));
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs).unwrap()
}
