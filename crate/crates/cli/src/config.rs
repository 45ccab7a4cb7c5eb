//! Experiment configuration files.
//!
//! A config is TOML with one table per experiment (`[fig1]`, `[fig2]`,
//! `[fig3]`, `[oracle]`). Command-line flags override file values. The thermal
//! occupation `nb` has no default and must be given somewhere.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section {
    pub preset: Option<String>,
    pub nb: Option<f64>,
    pub nbar: Option<f64>,
    pub phi: Option<f64>,
    pub gt_max: Option<f64>,
    pub gt_step: Option<f64>,
    pub si_time: Option<bool>,
    pub t_max: Option<f64>,
    pub out: Option<String>,
}

impl Section {
    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(&self, over: &Section) -> Section {
        Section {
            preset: over.preset.clone().or_else(|| self.preset.clone()),
            nb: over.nb.or(self.nb),
            nbar: over.nbar.or(self.nbar),
            phi: over.phi.or(self.phi),
            gt_max: over.gt_max.or(self.gt_max),
            gt_step: over.gt_step.or(self.gt_step),
            si_time: over.si_time.or(self.si_time),
            t_max: over.t_max.or(self.t_max),
            out: over.out.clone().or_else(|| self.out.clone()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct ConfigFile {
    pub sections: BTreeMap<String, Section>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).context("malformed config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn section(&self, name: &str) -> Section {
        self.sections.get(name).cloned().unwrap_or_default()
    }
}
