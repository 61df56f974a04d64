use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use super::fft::FftBackend;
use crate::{Error, Result};

/// Uniform periodic grid on `[-π, π)^d` with `2M` points per axis.
///
/// Fourier coefficients are stored in FFT order along every axis: index `i`
/// holds wavenumber `i` for `i <= M` and `i - 2M` otherwise, so the mode set is
/// `{-M+1, …, M}`. In two dimensions the flat index is `ix * 2M + iy`.
///
/// Collocation points are `x_n = -π + πn/M`, `n = 1..=2M`. Public sample
/// buffers ([`crate::SpectralField::to_samples`]) follow that order;
/// physical-space work internal to the crate uses the rotated order
/// `x_j = πj/M`, which is what the DFT expects.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    half: usize,
    backend: Arc<dyn FftBackend>,
}

impl Grid {
    /// Grid backed by rustfft.
    #[cfg(feature = "std")]
    pub fn new(dim: usize, half: usize) -> Result<Self> {
        Self::validate(dim, half)?;
        let backend = Arc::new(super::fft::RustFftBackend::new(2 * half));
        Ok(Self { dim, half, backend })
    }

    pub fn with_backend(dim: usize, half: usize, backend: Arc<dyn FftBackend>) -> Result<Self> {
        Self::validate(dim, half)?;
        if backend.len() != 2 * half {
            return Err(Error::InvalidConfig(alloc::format!(
                "FFT backend length {} does not match 2M = {}",
                backend.len(),
                2 * half
            )));
        }
        Ok(Self { dim, half, backend })
    }

    fn validate(dim: usize, half: usize) -> Result<()> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if half < 4 {
            return Err(Error::ResolutionTooSmall(half));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half-resolution `M`.
    pub fn half(&self) -> usize {
        self.half
    }

    /// Points per axis, `2M`.
    pub fn points_per_axis(&self) -> usize {
        2 * self.half
    }

    /// Total number of collocation points, `(2M)^d`.
    pub fn len(&self) -> usize {
        self.points_per_axis().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest `N` strictly below `2M/3`: quadratic products of fields
    /// supported on `|k_j| <= N` alias only onto modes above `N`.
    pub fn dealias_cutoff(&self) -> usize {
        (2 * self.half - 1) / 3
    }

    /// Collocation coordinates along one axis, `x_n = -π + πn/M`.
    pub fn points(&self) -> Vec<f64> {
        let m = self.half as f64;
        (1..=self.points_per_axis()).map(|n| -PI + PI * n as f64 / m).collect()
    }

    /// Quadrature weight of one collocation point, `(2π)^d / (2M)^d`.
    pub fn cell_volume(&self) -> f64 {
        let h = PI / self.half as f64;
        libm::pow(h, self.dim as f64)
    }

    /// Wavenumber stored at FFT index `i` along one axis.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.points_per_axis();
        debug_assert!(i < n);
        if i <= self.half {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// FFT index of wavenumber `k` along one axis, if resolved.
    pub fn axis_index(&self, k: i64) -> Option<usize> {
        let m = self.half as i64;
        if k > m || k <= -m {
            return None;
        }
        let n = self.points_per_axis() as i64;
        Some(k.rem_euclid(n) as usize)
    }

    /// Flat coefficient index of the mode tuple `k` (length `d`).
    pub fn flat_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let n = self.points_per_axis();
        k.iter().try_fold(0usize, |acc, &kj| Some(acc * n + self.axis_index(kj)?))
    }

    /// Mode tuple at a flat coefficient index; the second entry is 0 in 1D.
    pub fn mode(&self, flat: usize) -> [i64; 2] {
        let n = self.points_per_axis();
        match self.dim {
            1 => [self.wavenumber(flat), 0],
            _ => [self.wavenumber(flat / n), self.wavenumber(flat % n)],
        }
    }

    /// Wavenumbers of every axis position in FFT order.
    pub(crate) fn axis_wavenumbers(&self) -> Vec<i64> {
        (0..self.points_per_axis()).map(|i| self.wavenumber(i)).collect()
    }

    /// `|k|^2` for every flat index.
    pub(crate) fn squared_wavenumbers(&self) -> Vec<f64> {
        let ks = self.axis_wavenumbers();
        match self.dim {
            1 => ks.iter().map(|&k| (k * k) as f64).collect(),
            _ => {
                let mut out = Vec::with_capacity(self.len());
                for &kx in &ks {
                    for &ky in &ks {
                        out.push((kx * kx + ky * ky) as f64);
                    }
                }
                out
            }
        }
    }

    /// Position of the public sample `p` (ordered as [`Grid::points`]) in the
    /// internal physical buffer, per axis.
    fn internal_axis_position(&self, p: usize) -> usize {
        (p + 1 + self.half) % self.points_per_axis()
    }

    pub(crate) fn internal_position(&self, public: usize) -> usize {
        let n = self.points_per_axis();
        match self.dim {
            1 => self.internal_axis_position(public),
            _ => {
                let (px, py) = (public / n, public % n);
                self.internal_axis_position(px) * n + self.internal_axis_position(py)
            }
        }
    }

    /// Reorder a public sample buffer into internal physical order.
    pub(crate) fn to_internal_order(&self, public: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; public.len()];
        for (p, &v) in public.iter().enumerate() {
            out[self.internal_position(p)] = v;
        }
        out
    }

    pub(crate) fn to_public_order(&self, internal: &[f64]) -> Vec<f64> {
        (0..internal.len()).map(|p| internal[self.internal_position(p)]).collect()
    }

    /// Physical coordinates of every internal position (`[x, y]`, `y = 0` in 1D).
    pub(crate) fn internal_coordinates(&self, index: usize) -> [f64; 2] {
        let n = self.points_per_axis();
        let h = PI / self.half as f64;
        let wrap = |j: usize| {
            let x = h * j as f64;
            if x > PI {
                x - 2.0 * PI
            } else {
                x
            }
        };
        match self.dim {
            1 => [wrap(index), 0.0],
            _ => [wrap(index / n), wrap(index % n)],
        }
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let run = |b: &mut [Complex64]| {
            if inverse {
                self.backend.inverse(b)
            } else {
                self.backend.forward(b)
            }
        };
        run(buf);
        if self.dim == 2 {
            let n = self.points_per_axis();
            transpose_square(buf, n);
            run(buf);
            transpose_square(buf, n);
        }
    }

    /// Normalized coefficients of real internal-order samples. The result is
    /// made exactly Hermitian-symmetric.
    pub(crate) fn forward(&self, physical: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(physical.len(), self.len());
        let mut buf: Vec<Complex64> = physical.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut buf, false);
        let scale = 1.0 / self.len() as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        self.symmetrize(&mut buf);
        buf
    }

    /// Internal-order samples of a coefficient vector; imaginary round-off is dropped.
    pub(crate) fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        debug_assert_eq!(coeffs.len(), self.len());
        let mut buf = coeffs.to_vec();
        self.transform(&mut buf, true);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Flat index of the mode `-k` for the mode stored at `flat`.
    pub(crate) fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.points_per_axis();
        let neg = |i: usize| (n - i) % n;
        match self.dim {
            1 => neg(flat),
            _ => neg(flat / n) * n + neg(flat % n),
        }
    }

    /// Enforce `c(-k) = conj(c(k))`; self-conjugate modes become real.
    pub(crate) fn symmetrize(&self, coeffs: &mut [Complex64]) {
        for i in 0..coeffs.len() {
            let j = self.conjugate_index(i);
            if j < i {
                continue;
            }
            if j == i {
                coeffs[i].im = 0.0;
            } else {
                let avg = (coeffs[i] + coeffs[j].conj()) * 0.5;
                coeffs[i] = avg;
                coeffs[j] = avg.conj();
            }
        }
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.half == other.half
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("dim", &self.dim).field("half", &self.half).finish()
    }
}

#[cfg(all(test, feature = "std"))]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_points() {
        let g = Grid::new(1, 4).unwrap();
        let x = g.points();
        assert_eq!(x.len(), 8);
        assert!((x[0] + 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((x[7] - PI).abs() < 1e-15);
        for w in x.windows(2) {
            assert!((w[1] - w[0] - PI / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_dimensional_point_count() {
        let g = Grid::new(2, 8).unwrap();
        assert_eq!(g.len(), 256);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(Grid::new(3, 8).unwrap_err(), Error::UnsupportedDimension(3));
        assert_eq!(Grid::new(1, 3).unwrap_err(), Error::ResolutionTooSmall(3));
    }

    #[test]
    fn mode_set_and_indexing() {
        let g = Grid::new(1, 4).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, [0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.axis_index(-4), None);
        assert_eq!(g.axis_index(4), Some(4));
        let g2 = Grid::new(2, 4).unwrap();
        let flat = g2.flat_index(&[-1, 2]).unwrap();
        assert_eq!(g2.mode(flat), [-1, 2]);
        assert_eq!(g2.mode(g2.conjugate_index(flat)), [1, -2]);
    }

    #[test]
    fn cutoff_is_strictly_below_two_thirds() {
        let cut = |half| Grid::new(1, half).unwrap().dealias_cutoff();
        assert_eq!(cut(128), 85);
        assert_eq!(cut(12), 7);
        assert_eq!(cut(6), 3);
        for half in 4..200 {
            assert!(3 * cut(half) < 2 * half);
            assert!(3 * (cut(half) + 1) >= 2 * half);
        }
    }

    #[test]
    fn internal_order_round_trip() {
        let g = Grid::new(2, 4).unwrap();
        let public: Vec<f64> = (0..g.len()).map(|i| i as f64).collect();
        assert_eq!(g.to_public_order(&g.to_internal_order(&public)), public);
        let x = g.points();
        for p in [0, 5, 17, 63] {
            let c = g.internal_coordinates(g.internal_position(p));
            let (px, py) = (p / 8, p % 8);
            let same = |a: f64, b: f64| libm::fabs(libm::remainder(a - b, 2.0 * PI)) < 1e-12;
            assert!(same(c[0], x[px]) && same(c[1], x[py]));
        }
    }
}
