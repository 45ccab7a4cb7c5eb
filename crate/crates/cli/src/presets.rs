//! Built-in cavity parameter sets.

use anyhow::{bail, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    /// Field decay constant, s⁻¹.
    pub kappa: f64,
    /// Atom-field coupling, s⁻¹.
    pub g: f64,
    /// Default field intensity |z|².
    pub nbar: f64,
    pub gt_max: f64,
    pub gt_step: f64,
}

pub const BENSON97: Preset = Preset {
    name: "benson97",
    kappa: 8.33,
    g: 36_000.0,
    nbar: 49.0,
    gt_max: 60.0,
    gt_step: 0.01,
};

pub const BRUNE96: Preset = Preset {
    name: "brune96",
    kappa: 2_500.0,
    g: 24_000.0,
    nbar: 3.3,
    gt_max: 30.0,
    gt_step: 0.01,
};

pub const PRESETS: [Preset; 2] = [BENSON97, BRUNE96];

pub fn preset(name: &str) -> Result<Preset> {
    match PRESETS.iter().find(|p| p.name == name) {
        Some(p) => Ok(*p),
        None => bail!(
            "unknown preset `{name}` (available: {})",
            PRESETS.map(|p| p.name).join(", ")
        ),
    }
}
