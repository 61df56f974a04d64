use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{FilterSpec, Grid};
use crate::{Error, Result};

/// Real periodic scalar field stored as Fourier coefficients.
///
/// Coefficients are normalized so that `f(x) = Σ_k c_k e^{ik·x}` at the
/// collocation points, and kept Hermitian-symmetric.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), coeffs: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Field from coefficients in FFT order; symmetry is enforced.
    pub fn from_coeffs(grid: &Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SampleLength { expected: grid.len(), got: coeffs.len() });
        }
        grid.symmetrize(&mut coeffs);
        Ok(Self { grid: grid.clone(), coeffs })
    }

    /// Samples `f` at the collocation points and transforms.
    pub fn from_function<F>(grid: &Grid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        let dim = grid.dim();
        let mut physical = Vec::with_capacity(grid.len());
        for j in 0..grid.len() {
            let x = grid.internal_coordinates(j);
            let v = f(&x[..dim]);
            if !v.is_finite() {
                let public = (0..grid.len()).find(|&p| grid.internal_position(p) == j).unwrap_or(j);
                return Err(Error::NonFiniteSample { index: public });
            }
            physical.push(v);
        }
        Ok(Self::from_physical(grid, &physical))
    }

    /// Field from values at [`Grid::points`] (row-major `[x][y]` in 2D).
    pub fn from_samples(grid: &Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::SampleLength { expected: grid.len(), got: samples.len() });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self::from_physical(grid, &grid.to_internal_order(samples)))
    }

    /// Values at [`Grid::points`] (row-major `[x][y]` in 2D).
    pub fn to_samples(&self) -> Vec<f64> {
        self.grid.to_public_order(&self.physical())
    }

    pub(crate) fn from_physical(grid: &Grid, physical: &[f64]) -> Self {
        Self { grid: grid.clone(), coeffs: grid.forward(physical) }
    }

    pub(crate) fn physical(&self) -> Vec<f64> {
        self.grid.inverse(&self.coeffs)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Coefficients in FFT order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of mode `k`; zero for modes the grid does not resolve.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.grid.flat_index(k).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Spectral derivative along `axis` (0-based). The Nyquist plane
    /// `k_axis = M` is zeroed.
    pub fn differentiate(&self, axis: usize) -> Result<Self> {
        let dim = self.grid.dim();
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        let half = self.grid.half() as i64;
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.grid.mode(i)[axis];
            *c = if k == half { Complex64::new(0.0, 0.0) } else { *c * Complex64::new(0.0, k as f64) };
        }
        Ok(out)
    }

    pub fn apply_filter(&self, filter: &FilterSpec) -> Result<Self> {
        if filter.cutoff > self.grid.half() {
            return Err(Error::CutoffTooLarge { cutoff: filter.cutoff, half: self.grid.half() });
        }
        let mut out = self.clone();
        out.multiply_symbol(&filter.symbol_table(&self.grid));
        Ok(out)
    }

    /// Zero the highest third of the modes: sharp filter at [`Grid::dealias_cutoff`].
    pub fn dealias(&self) -> Self {
        let filter = FilterSpec::sharp(self.grid.dealias_cutoff());
        let mut out = self.clone();
        out.multiply_symbol(&filter.symbol_table(&self.grid));
        out
    }

    pub(crate) fn multiply_symbol(&mut self, symbol: &[f64]) {
        for (c, &s) in self.coeffs.iter_mut().zip(symbol) {
            *c *= s;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Maximum absolute value over the collocation points.
    pub fn max_abs(&self) -> f64 {
        self.physical().iter().fold(0.0, |m, v| m.max(libm::fabs(*v)))
    }

    /// Minimum value over the collocation points.
    pub fn min_value(&self) -> f64 {
        self.physical().iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// `|f|_{H^s}^2` including the `(2π)^d` volume factor.
    pub fn sobolev_norm_squared(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(Error::NegativeRegularity(s));
        }
        let volume = libm::pow(2.0 * PI, self.grid.dim() as f64);
        let sum: f64 = if s == 0.0 {
            self.coeffs.iter().map(|c| c.norm_sqr()).sum()
        } else {
            self.grid
                .squared_wavenumbers()
                .iter()
                .zip(&self.coeffs)
                .map(|(&k2, c)| libm::pow(1.0 + k2, s) * c.norm_sqr())
                .sum()
        };
        Ok(sum * volume)
    }

    /// `(f, g)_{L^2}` over the torus.
    pub fn l2_inner(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let volume = libm::pow(2.0 * PI, self.grid.dim() as f64);
        let sum: f64 = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a * b.conj()).re).sum();
        Ok(sum * volume)
    }

    /// Largest `max_j |k_j|` whose coefficient exceeds `tol · max|c|`.
    pub fn support_radius(&self, tol: f64) -> usize {
        let peak = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if peak == 0.0 {
            return 0;
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol * peak)
            .map(|(i, _)| {
                let k = self.grid.mode(i);
                k[0].unsigned_abs().max(k[1].unsigned_abs()) as usize
            })
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.coeffs {
            *c *= a;
        }
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert!(self.grid == other.grid);
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * a;
        }
    }

    /// Coefficients moved onto a finer grid; the Nyquist coefficient of the
    /// source is split evenly between `±M` so the result stays real.
    pub fn zero_padded(&self, target: &Grid) -> Result<Self> {
        if target.dim() != self.grid.dim() {
            return Err(Error::GridMismatch);
        }
        if target.half() < self.grid.half() {
            return Err(Error::ReferenceTooCoarse { reference: target.half(), solution: self.grid.half() });
        }
        let half = self.grid.half() as i64;
        let mut out = SpectralField::zeros(target);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.grid.mode(i);
            let k = &k[..self.grid.dim()];
            let mut targets: Vec<(Vec<i64>, f64)> = vec![(Vec::new(), 1.0)];
            for &kj in k {
                let mut next = Vec::new();
                for (prefix, w) in targets {
                    if kj == half && target.half() as i64 > half {
                        for sign in [1, -1] {
                            let mut p = prefix.clone();
                            p.push(sign * kj);
                            next.push((p, w * 0.5));
                        }
                    } else {
                        let mut p = prefix;
                        p.push(kj);
                        next.push((p, w));
                    }
                }
                targets = next;
            }
            for (kt, w) in targets {
                let idx = target.flat_index(&kt).expect("mode resolved on finer grid");
                out.coeffs[idx] += c * w;
            }
        }
        Ok(out)
    }
}

/// `n` real fields on one shared grid.
#[derive(Clone, Debug)]
pub struct StateField {
    components: Vec<SpectralField>,
}

impl StateField {
    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::ComponentMismatch { expected: 1, got: 0 });
        }
        let grid = components[0].grid();
        if components.iter().any(|c| c.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { components })
    }

    pub fn zeros(grid: &Grid, n: usize) -> Self {
        Self { components: (0..n).map(|_| SpectralField::zeros(grid)).collect() }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<SpectralField> {
        self.components
    }

    /// `|U|_{H^s}`, summed over components.
    pub fn sobolev_norm(&self, s: f64) -> Result<f64> {
        let mut total = 0.0;
        for c in &self.components {
            total += c.sobolev_norm_squared(s)?;
        }
        Ok(libm::sqrt(total))
    }

    pub fn l2_inner(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::ComponentMismatch { expected: self.len(), got: other.len() });
        }
        let mut total = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            total += a.l2_inner(b)?;
        }
        Ok(total)
    }

    pub fn apply_filter(&self, filter: &FilterSpec) -> Result<Self> {
        let components = self.components.iter().map(|c| c.apply_filter(filter)).collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    pub fn dealias(&self) -> Self {
        Self { components: self.components.iter().map(SpectralField::dealias).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(SpectralField::is_finite)
    }

    /// Maximum absolute sample over all components.
    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    pub fn scale(&mut self, a: f64) {
        self.components.iter_mut().for_each(|c| c.scale(a));
    }

    pub fn axpy(&mut self, a: f64, other: &Self) {
        for (c, o) in self.components.iter_mut().zip(&other.components) {
            c.axpy(a, o);
        }
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_coeff_difference(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.components.iter().zip(&other.components) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                worst = worst.max((x - y).norm());
            }
        }
        worst
    }

    pub fn zero_padded(&self, target: &Grid) -> Result<Self> {
        let components = self.components.iter().map(|c| c.zero_padded(target)).collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }
}

#[cfg(all(test, feature = "std"))]
mod tests {
    use super::*;

    fn grid(dim: usize, half: usize) -> Grid {
        Grid::new(dim, half).unwrap()
    }

    #[test]
    fn constant_field() {
        let g = grid(1, 4);
        let f = SpectralField::from_function(&g, |_| 1.0).unwrap();
        assert!((f.coeff(&[0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for k in 1..=4 {
            assert!(f.coeff(&[k]).norm() < 1e-15);
            assert!(f.coeff(&[-k + 1]).norm() < 1e-15 || k == 1);
        }
        assert!(f.to_samples().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn single_sine_mode() {
        let g = grid(1, 4);
        let f = SpectralField::from_function(&g, |x| libm::sin(3.0 * x[0])).unwrap();
        assert!((f.coeff(&[3]) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((f.coeff(&[-3]) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        for k in [-2, -1, 0, 1, 2, 4] {
            assert!(f.coeff(&[k]).norm() < 1e-15);
        }
        for (s, x) in f.to_samples().iter().zip(g.points()) {
            assert!((s - libm::sin(3.0 * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = grid(1, 4);
        let err = SpectralField::from_function(&g, |x| if x[0] > 3.0 { f64::NAN } else { 0.0 });
        assert_eq!(err.unwrap_err(), Error::NonFiniteSample { index: 7 });
        let mut s = vec![0.0; 8];
        s[2] = f64::INFINITY;
        assert_eq!(SpectralField::from_samples(&g, &s).unwrap_err(), Error::NonFiniteSample { index: 2 });
    }

    #[test]
    fn derivative_of_sine_and_constant() {
        let g = grid(1, 8);
        let f = SpectralField::from_function(&g, |x| libm::sin(3.0 * x[0])).unwrap();
        let df = f.differentiate(0).unwrap();
        for (s, x) in df.to_samples().iter().zip(g.points()) {
            assert!((s - 3.0 * libm::cos(3.0 * x)).abs() < 1e-13);
        }
        let c = SpectralField::from_function(&g, |_| 2.5).unwrap();
        assert!(c.differentiate(0).unwrap().coeffs().iter().all(|c| c.norm() < 1e-15));
        assert_eq!(f.differentiate(1).unwrap_err(), Error::AxisOutOfRange { axis: 1, dim: 1 });
    }

    #[test]
    fn nyquist_plane_is_zeroed() {
        let g = grid(1, 4);
        let f = SpectralField::from_function(&g, |x| libm::cos(4.0 * x[0])).unwrap();
        assert!((f.coeff(&[4]).re - 1.0).abs() < 1e-14);
        assert!(f.differentiate(0).unwrap().coeff(&[4]).norm() == 0.0);
    }

    #[test]
    fn mixed_partial_in_two_dimensions() {
        let g = grid(2, 8);
        let f = SpectralField::from_function(&g, |x| libm::sin(2.0 * x[0]) * libm::cos(5.0 * x[1])).unwrap();
        let dy = f.differentiate(1).unwrap();
        let x = g.points();
        let samples = dy.to_samples();
        let mut worst = 0.0f64;
        for (ix, &xv) in x.iter().enumerate() {
            for (iy, &yv) in x.iter().enumerate() {
                let exact = -5.0 * libm::sin(2.0 * xv) * libm::sin(5.0 * yv);
                worst = worst.max((samples[ix * 16 + iy] - exact).abs());
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn filters_on_sine() {
        let g = grid(1, 8);
        let f = SpectralField::from_function(&g, |x| libm::sin(3.0 * x[0])).unwrap();
        let sharp = f.apply_filter(&FilterSpec::sharp(4)).unwrap();
        assert!(sharp.max_coeff_difference_scalar(&f) < 1e-15);
        let smooth = f.apply_filter(&FilterSpec::smooth(4)).unwrap();
        assert!((smooth.coeff(&[3]) - f.coeff(&[3]) * 0.25).norm() < 1e-16);
        assert_eq!(f.apply_filter(&FilterSpec::sharp(9)).unwrap_err(), Error::CutoffTooLarge { cutoff: 9, half: 8 });
    }

    #[test]
    fn dealias_uses_the_two_thirds_cutoff() {
        // 2M = 48, N = 15: everything with |k| > 15 is removed.
        let g = grid(1, 24);
        let f = SpectralField::from_function(&g, |x| (1..=24).map(|k| libm::cos(k as f64 * x[0])).sum()).unwrap();
        let d = f.dealias();
        for k in -23i64..=24 {
            let c = d.coeff(&[k]);
            if k.unsigned_abs() > 15 {
                assert_eq!(c.norm(), 0.0);
            } else if k != 0 {
                assert!(c.norm() > 0.4);
            }
        }
        let again = d.dealias();
        assert_eq!(again.coeffs(), d.coeffs());
    }

    #[test]
    fn square_of_top_mode_dealiases_to_constant() {
        // 2M = 3N points with N = 6: sin(6x)^2 = 1/2 - cos(12x)/2 and the
        // 12-mode aliases onto -6, which the strict cutoff (5) removes.
        let g = grid(1, 9);
        let s = SpectralField::from_function(&g, |x| libm::sin(6.0 * x[0])).unwrap();
        let phys: Vec<f64> = s.physical().iter().map(|v| v * v).collect();
        let prod = SpectralField::from_physical(&g, &phys).dealias();
        assert!((prod.coeff(&[0]).re - 0.5).abs() < 1e-15);
        for k in 1..=9 {
            assert!(prod.coeff(&[k]).norm() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn sobolev_norm_of_sine() {
        let g = grid(1, 16);
        for k in [1.0f64, 3.0, 7.0] {
            let f = StateField::new(vec![SpectralField::from_function(&g, |x| libm::sin(k * x[0])).unwrap()]).unwrap();
            let sqrt_pi = libm::sqrt(PI);
            assert!((f.sobolev_norm(0.0).unwrap() - sqrt_pi).abs() < 1e-14);
            for s in [0.5, 1.0, 2.0] {
                let expected = libm::pow(1.0 + k * k, s / 2.0) * sqrt_pi;
                assert!((f.sobolev_norm(s).unwrap() / expected - 1.0).abs() < 1e-13);
            }
        }
        let f = StateField::zeros(&g, 1);
        assert_eq!(f.sobolev_norm(-1.0).unwrap_err(), Error::NegativeRegularity(-1.0));
    }

    #[test]
    fn inner_products_of_trig_functions() {
        let g = grid(1, 8);
        let s = SpectralField::from_function(&g, |x| libm::sin(x[0])).unwrap();
        let c = SpectralField::from_function(&g, |x| libm::cos(x[0])).unwrap();
        assert!(s.l2_inner(&c).unwrap().abs() < 1e-15);
        assert!((s.l2_inner(&s).unwrap() - PI).abs() < 1e-14);
        let other = SpectralField::zeros(&grid(1, 16));
        assert_eq!(s.l2_inner(&other).unwrap_err(), Error::GridMismatch);
    }

    #[test]
    fn state_requires_shared_grid() {
        let a = SpectralField::zeros(&grid(1, 8));
        let b = SpectralField::zeros(&grid(1, 16));
        assert_eq!(StateField::new(vec![a, b]).unwrap_err(), Error::GridMismatch);
    }

    #[test]
    fn zero_padding_preserves_the_function() {
        let coarse = grid(1, 8);
        let fine = grid(1, 32);
        let f = |x: &[f64]| libm::sin(3.0 * x[0]) + 0.25 * libm::cos(8.0 * x[0]);
        let a = SpectralField::from_function(&coarse, f).unwrap();
        let padded = a.zero_padded(&fine).unwrap();
        // cos(8x) on the coarse grid is its Nyquist mode; after the split it is
        // reproduced exactly on the finer grid.
        let b = SpectralField::from_function(&fine, f).unwrap();
        assert!(padded.max_coeff_difference_scalar(&b) < 1e-15);
        assert!(b.zero_padded(&coarse).is_err());
    }

    impl SpectralField {
        fn max_coeff_difference_scalar(&self, other: &Self) -> f64 {
            self.coeffs.iter().zip(&other.coeffs).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
        }
    }
}
