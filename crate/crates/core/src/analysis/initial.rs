//! Catalog of initial data for the Saint-Venant experiments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::spectral::{FilterSpec, Grid, SpectralField, StateField};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialKind {
    /// `η = ½exp(-|x|^α)exp(-4x²)`, `u = 0`.
    Init1,
    /// `η = -½cos(px)`, `u = sin(px) + sin((N-q)x)/(N-q)^s`.
    Init2,
    /// `η = -cos x`, `u = sin x + sin(Nx)/N^s`.
    ZeroDepth,
    /// Two-dimensional low mode plus a mode at `N` in each velocity component.
    Init2D,
}

impl InitialKind {
    pub const ALL: [InitialKind; 4] =
        [InitialKind::Init1, InitialKind::Init2, InitialKind::ZeroDepth, InitialKind::Init2D];

    pub fn name(self) -> &'static str {
        match self {
            InitialKind::Init1 => "init1",
            InitialKind::Init2 => "init2",
            InitialKind::ZeroDepth => "init_zero_depth",
            InitialKind::Init2D => "init2D",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            InitialKind::Init2D => 2,
            _ => 1,
        }
    }

    /// Parameter names with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            InitialKind::Init1 => &[("alpha", 1.5)],
            InitialKind::Init2 => &[("p", 1.0), ("q", 0.0), ("s", 2.0)],
            InitialKind::ZeroDepth => &[("s", 2.0)],
            InitialKind::Init2D => &[("h0", 0.5), ("u_l", 0.5), ("v_l", -0.5), ("u_h", 1.0), ("v_h", -1.0), ("s", 2.0)],
        }
    }
}

/// A catalog entry with its parameters resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    kind: InitialKind,
    params: BTreeMap<String, f64>,
}

impl InitialData {
    /// Looks up `name` in the catalog and overrides defaults with `params`.
    pub fn from_name(name: &str, params: &[(&str, f64)]) -> Result<Self> {
        let kind = InitialKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownInitialData { name: name.to_string() })?;
        Self::new(kind, params)
    }

    pub fn new(kind: InitialKind, params: &[(&str, f64)]) -> Result<Self> {
        let mut resolved: BTreeMap<String, f64> = kind.defaults().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in params {
            match resolved.get_mut(*k) {
                Some(slot) => *slot = *v,
                None => {
                    let known: Vec<&str> = kind.defaults().iter().map(|(k, _)| *k).collect();
                    return Err(Error::InvalidParameter {
                        name: "initial",
                        reason: format!("`{}` takes no parameter `{k}` (known: {})", kind.name(), known.join(", ")),
                    });
                }
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name: "initial", reason: format!("`{k}` must be finite") });
            }
        }
        let data = Self { kind, params: resolved };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidParameter { name: "initial", reason });
        match self.kind {
            InitialKind::Init1 if self.param("alpha") <= 0.0 => bad("alpha must be positive".into()),
            InitialKind::Init2 => {
                let (p, q) = (self.param("p"), self.param("q"));
                if p < 1.0 || libm::trunc(p) != p || q < 0.0 || libm::trunc(q) != q {
                    return bad("p and q must be integers with p >= 1 and q >= 0".into());
                }
                if q >= p {
                    return bad(format!("q < p required, got p = {p}, q = {q}"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> InitialKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, name: &str) -> f64 {
        self.params[name]
    }

    /// Catalog names.
    pub fn catalog() -> Vec<&'static str> {
        InitialKind::ALL.iter().map(|k| k.name()).collect()
    }

    /// Samples the formulas at the collocation points of `grid`. `N`-dependent
    /// data use the grid's dealiasing cutoff.
    pub fn build(&self, grid: &Grid) -> Result<StateField> {
        if grid.dim() != self.dim() {
            return Err(Error::InvalidParameter {
                name: "initial",
                reason: format!("`{}` is {}-dimensional, grid is {}-dimensional", self.name(), self.dim(), grid.dim()),
            });
        }
        let n = grid.dealias_cutoff() as f64;
        let field = |f: &dyn Fn(&[f64]) -> f64| SpectralField::from_function(grid, f);
        let components = match self.kind {
            InitialKind::Init1 => {
                let alpha = self.param("alpha");
                vec![
                    field(&|x| {
                        let ax = libm::fabs(x[0]);
                        let power = if ax == 0.0 { 0.0 } else { libm::pow(ax, alpha) };
                        0.5 * libm::exp(-power) * libm::exp(-4.0 * x[0] * x[0])
                    })?,
                    SpectralField::zeros(grid),
                ]
            }
            InitialKind::Init2 => {
                let (p, q, s) = (self.param("p"), self.param("q"), self.param("s"));
                let kh = n - q;
                if kh <= p {
                    return Err(Error::ResolutionTooSmall(grid.half()));
                }
                vec![
                    field(&|x| -0.5 * libm::cos(p * x[0]))?,
                    field(&|x| libm::sin(p * x[0]) + libm::sin(kh * x[0]) / libm::pow(kh, s))?,
                ]
            }
            InitialKind::ZeroDepth => {
                let s = self.param("s");
                vec![
                    field(&|x| -libm::cos(x[0]))?,
                    field(&|x| libm::sin(x[0]) + libm::sin(n * x[0]) / libm::pow(n, s))?,
                ]
            }
            InitialKind::Init2D => {
                let p = |k: &str| self.param(k);
                let (h0, ul, vl, uh, vh, s) = (p("h0"), p("u_l"), p("v_l"), p("u_h"), p("v_h"), p("s"));
                let scale = libm::pow(n, s);
                vec![
                    field(&|x| (h0 - 1.0) * libm::cos(x[0]) * libm::cos(x[1]))?,
                    field(&|x| {
                        ul * libm::sin(x[0]) * libm::cos(x[1]) + uh * libm::sin(n * x[0]) * libm::cos(n * x[1]) / scale
                    })?,
                    field(&|x| {
                        vl * libm::cos(x[0]) * libm::sin(x[1]) + vh * libm::cos(n * x[0]) * libm::sin(n * x[1]) / scale
                    })?,
                ]
            }
        };
        StateField::new(components)
    }

    /// `P_N` of the sampled data, with `N` the grid's dealiasing cutoff.
    pub fn initial_state(&self, grid: &Grid) -> Result<StateField> {
        self.build(grid)?.apply_filter(&FilterSpec::sharp(grid.dealias_cutoff()))
    }
}

#[cfg(all(test, feature = "std"))]
mod tests {
    use super::*;

    #[test]
    fn init1_at_origin() {
        let g = Grid::new(1, 64).unwrap();
        let st = InitialData::from_name("init1", &[]).unwrap().build(&g).unwrap();
        // public index 63 is x = 0
        assert_eq!(g.points()[63], 0.0);
        assert!((st.component(0).to_samples()[63] - 0.5).abs() < 1e-14);
        assert!(st.component(1).max_abs() == 0.0);
    }

    #[test]
    fn init2_high_mode_uses_grid_cutoff() {
        // 2M = 50 gives N = 16.
        let g = Grid::new(1, 25).unwrap();
        assert_eq!(g.dealias_cutoff(), 16);
        let st = InitialData::from_name("init2", &[]).unwrap().build(&g).unwrap();
        let u = st.component(1);
        assert!((u.coeff(&[16]).im + 0.5 / 256.0).abs() < 1e-15);
        assert!((u.coeff(&[1]).im + 0.5).abs() < 1e-15);
    }

    #[test]
    fn unknown_names_and_bad_parameters() {
        let err = InitialData::from_name("init3", &[]).unwrap_err();
        assert_eq!(err, Error::UnknownInitialData { name: "init3".into() });
        assert!(InitialData::from_name("init1", &[("alpha", 0.0)]).is_err());
        assert!(InitialData::from_name("init1", &[("beta", 1.0)]).is_err());
        assert!(InitialData::from_name("init2", &[("q", 1.0)]).is_err());
        assert!(InitialData::from_name("init2", &[("p", 2.0), ("q", 1.0)]).is_ok());
    }

    #[test]
    fn init2d_is_real_finite_and_projected() {
        let g = Grid::new(2, 16).unwrap();
        let data = InitialData::from_name("init2D", &[("u_l", 2.0), ("v_l", -2.0)]).unwrap();
        let raw = data.build(&g).unwrap();
        assert!(raw.is_finite());
        let st = data.initial_state(&g).unwrap();
        for c in st.components() {
            assert!(c.support_radius(1e-14) <= g.dealias_cutoff());
        }
        let n = g.dealias_cutoff() as i64;
        assert!(st.component(1).coeff(&[n, n]).norm() > 0.0);
        assert!(data.build(&Grid::new(1, 16).unwrap()).is_err());
    }
}
