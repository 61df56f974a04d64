//! Experiment presets shipped with the binary (`presets/*.toml`) and the
//! built-in system definition files (`systems/*.sys`).

use crate::config::ExperimentConfig;
use crate::CliError;

pub const PRESETS: [(&str, &str); 10] = [
    ("fig-init1", include_str!("../presets/fig-init1.toml")),
    ("fig-num1", include_str!("../presets/fig-num1.toml")),
    ("tab-num1", include_str!("../presets/tab-num1.toml")),
    ("fig-num2", include_str!("../presets/fig-num2.toml")),
    ("fig-zerodepth", include_str!("../presets/fig-zerodepth.toml")),
    ("fig-2dnonham-conv", include_str!("../presets/fig-2dnonham-conv.toml")),
    ("fig-2dham-conv", include_str!("../presets/fig-2dham-conv.toml")),
    ("fig-2d-zerodepth", include_str!("../presets/fig-2d-zerodepth.toml")),
    ("fig-2d-strict-hyperbolicity", include_str!("../presets/fig-2d-strict-hyperbolicity.toml")),
    ("jn-growth", include_str!("../presets/jn-growth.toml")),
];

pub const SYSTEM_FILES: [(&str, &str); 3] = [
    ("saint-venant-1d", include_str!("../systems/saint-venant-1d.sys")),
    ("saint-venant-2d-standard", include_str!("../systems/saint-venant-2d-standard.sys")),
    ("saint-venant-2d-hamiltonian", include_str!("../systems/saint-venant-2d-hamiltonian.sys")),
];

pub fn preset(name: &str) -> Result<ExperimentConfig, CliError> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("unknown preset `{name}` (available: {})", names.join(", ")))
    })?;
    ExperimentConfig::parse(text)
}
