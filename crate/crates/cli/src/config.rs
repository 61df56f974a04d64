//! Experiment configuration files.
//!
//! A configuration is a flat TOML document; every key is optional and the
//! subcommand decides which ones it needs:
//!
//! ```toml
//! command = "converge"          # subcommand a preset belongs to
//! description = "..."
//! system = "saint-venant-1d"    # built-in name or path to a system file
//! scheme = ["sharp", "smooth-nl"]
//! initial = "init1"
//! params = { alpha = 1.5 }
//! M = 128                       # half-resolution: 2M points per axis
//! M_list = [16, 32, 64]
//! M_ref = 1024
//! dt = 1e-4
//! T = 0.1
//! s_norms = [0, 1]
//! output = "out/tab-num1"
//! N_list = [32, 64, 128, 256]   # probe-jn
//! p = 1
//! q = 0
//! variant = "standard"          # probe-jn symmetrizer
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    pub fn to_vec(&self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub description: Option<String>,
    pub system: Option<String>,
    pub scheme: Option<OneOrMany>,
    pub initial: Option<String>,
    pub params: Option<BTreeMap<String, f64>>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "M_list")]
    pub m_list: Option<Vec<usize>>,
    #[serde(rename = "M_ref")]
    pub m_ref: Option<usize>,
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub s_norms: Option<Vec<f64>>,
    pub output: Option<String>,
    #[serde(rename = "N_list")]
    pub n_list: Option<Vec<usize>>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub variant: Option<String>,
    /// Directory of the file the configuration came from, for relative paths.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub system: Option<String>,
    pub scheme: Option<Vec<String>>,
    pub m: Option<usize>,
    pub m_ref: Option<usize>,
    pub dt: Option<f64>,
    pub t: Option<f64>,
    pub out: Option<PathBuf>,
    pub n_list: Option<Vec<usize>>,
    pub p: Option<usize>,
    pub q: Option<usize>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.system {
            self.system = Some(v.clone());
        }
        if let Some(v) = &o.scheme {
            self.scheme = Some(OneOrMany::Many(v.clone()));
        }
        if let Some(v) = o.m {
            self.m = Some(v);
            // A single `--M` on a study narrows it to that resolution.
            if self.m_list.is_some() {
                self.m_list = Some(vec![v]);
            }
        }
        if let Some(v) = o.m_ref {
            self.m_ref = Some(v);
        }
        if let Some(v) = o.dt {
            self.dt = Some(v);
        }
        if let Some(v) = o.t {
            self.t = Some(v);
        }
        if let Some(v) = &o.out {
            self.output = Some(v.display().to_string());
        }
        if let Some(v) = &o.n_list {
            self.n_list = Some(v.clone());
        }
        if let Some(v) = o.p {
            self.p = Some(v);
        }
        if let Some(v) = o.q {
            self.q = Some(v);
        }
    }

    /// Positive-number checks and power-of-two warnings. Returns the warnings.
    pub fn validate(&self) -> Result<Vec<String>, CliError> {
        let mut warnings = Vec::new();
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => {
                Err(CliError::Config(format!("`{name}` must be positive, got {x}")))
            }
            _ => Ok(()),
        };
        positive("dt", self.dt)?;
        if let Some(t) = self.t {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("`T` must be non-negative, got {t}")));
            }
        }
        let mut halves: Vec<(&str, usize)> = Vec::new();
        halves.extend(self.m.map(|m| ("M", m)));
        halves.extend(self.m_ref.map(|m| ("M_ref", m)));
        halves.extend(self.m_list.iter().flatten().map(|&m| ("M_list", m)));
        for (name, m) in halves {
            if m == 0 {
                return Err(CliError::Config(format!("`{name}` entries must be positive")));
            }
            if !m.is_power_of_two() {
                warnings.push(format!("`{name}` = {m} is not a power of two"));
            }
        }
        if let Some(list) = &self.s_norms {
            if list.iter().any(|s| !(*s >= 0.0)) {
                return Err(CliError::Config("`s_norms` entries must be non-negative".into()));
            }
        }
        if let Some(list) = &self.n_list {
            if list.contains(&0) {
                return Err(CliError::Config("`N_list` entries must be positive".into()));
            }
        }
        Ok(warnings)
    }

    /// Resolves a possibly relative path against the configuration's directory.
    pub fn resolve_path(&self, p: &str) -> PathBuf {
        let path = PathBuf::from(p);
        match &self.base_dir {
            Some(base) if path.is_relative() && !path.exists() => base.join(path),
            _ => path,
        }
    }

    pub fn params_list(&self) -> Vec<(&str, f64)> {
        self.params.iter().flatten().map(|(k, v)| (k.as_str(), *v)).collect()
    }

    pub fn schemes(&self) -> Vec<String> {
        self.scheme.as_ref().map(OneOrMany::to_vec).unwrap_or_else(|| vec!["sharp".into()])
    }

    pub fn norms(&self) -> Vec<f64> {
        self.s_norms.clone().unwrap_or_else(|| vec![0.0, 1.0])
    }

    pub fn output_dir(&self) -> PathBuf {
        PathBuf::from(self.output.as_deref().unwrap_or("out"))
    }
}
