use alloc::vec::Vec;

use super::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    /// Indicator of the cube `max_j |k_j| <= N`.
    Sharp,
    /// Tensor product of the squared ramp `S1(k_j / N)`.
    Smooth,
}

/// Low-pass Fourier multiplier with cutoff `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub cutoff: usize,
}

/// One-dimensional smooth profile `S1(ξ) = max(0, min(1, 2 - 2|ξ|))^2`.
pub fn smooth_profile(xi: f64) -> f64 {
    let r = (2.0 - 2.0 * libm::fabs(xi)).clamp(0.0, 1.0);
    r * r
}

impl FilterSpec {
    pub fn sharp(cutoff: usize) -> Self {
        Self { kind: FilterKind::Sharp, cutoff }
    }

    pub fn smooth(cutoff: usize) -> Self {
        Self { kind: FilterKind::Smooth, cutoff }
    }

    /// Factor contributed by a single axis.
    pub fn axis_symbol(&self, k: i64) -> f64 {
        match self.kind {
            FilterKind::Sharp => {
                if k.unsigned_abs() as usize <= self.cutoff {
                    1.0
                } else {
                    0.0
                }
            }
            FilterKind::Smooth => {
                if self.cutoff == 0 {
                    return if k == 0 { 1.0 } else { 0.0 };
                }
                smooth_profile(k as f64 / self.cutoff as f64)
            }
        }
    }

    /// Multiplier applied to the mode `k`.
    pub fn symbol(&self, k: &[i64]) -> f64 {
        k.iter().map(|&kj| self.axis_symbol(kj)).product()
    }

    /// Symbol for every flat index of `grid`.
    pub(crate) fn symbol_table(&self, grid: &Grid) -> Vec<f64> {
        let axis: Vec<f64> = (0..grid.points_per_axis()).map(|i| self.axis_symbol(grid.wavenumber(i))).collect();
        match grid.dim() {
            1 => axis,
            _ => {
                let mut out = Vec::with_capacity(grid.len());
                for &sx in &axis {
                    for &sy in &axis {
                        out.push(sx * sy);
                    }
                }
                out
            }
        }
    }
}
