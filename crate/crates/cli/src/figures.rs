//! Figure data: revival probabilities and the η correlation on a gt grid.

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use catcavity_core::dissipative::DampingParams;
use catcavity_core::jc::JcParams;
use catcavity_core::observables::{
    correlation_parts, eta_from_parts, p_excited, p_joint, ExperimentConfig, FieldPreparation, Outcome,
};
use catcavity_core::photon_states::{coherent_distribution, default_truncation, CatSpec};

use crate::config::Section;
use crate::presets::{preset, Preset, BENSON97, BRUNE96};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
        }
    }

    fn default_presets(self) -> Vec<Preset> {
        match self {
            FigureId::Fig1 => vec![BENSON97],
            FigureId::Fig2 => vec![BRUNE96],
            FigureId::Fig3 => vec![BENSON97, BRUNE96],
        }
    }
}

/// Fully resolved inputs for one preset of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSettings {
    pub preset: Preset,
    pub nb: f64,
    pub nbar: f64,
    pub phi: f64,
    pub gt_max: f64,
    pub gt_step: f64,
    pub si_time: bool,
}

impl CurveSettings {
    pub fn grid(&self) -> Vec<f64> {
        let count = (self.gt_max / self.gt_step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| i as f64 * self.gt_step).collect()
    }

    fn damping(&self) -> Result<DampingParams> {
        Ok(DampingParams::new(self.preset.kappa, self.nb)?)
    }

    pub fn coherent(&self) -> Result<ExperimentConfig> {
        let n = default_truncation(self.nbar);
        Ok(ExperimentConfig::new(
            JcParams::resonant(self.preset.g)?,
            self.damping()?,
            FieldPreparation::Distribution(coherent_distribution(self.nbar, n)?),
            n,
        )?)
    }

    pub fn cat(&self) -> Result<ExperimentConfig> {
        Ok(ExperimentConfig::new(
            JcParams::resonant(self.preset.g)?,
            self.damping()?,
            FieldPreparation::Cat(CatSpec::new(self.nbar, self.phi)?),
            default_truncation(self.nbar),
        )?)
    }

    fn metadata(&self, figure: FigureId, field: &str, truncation: usize) -> String {
        format!(
            "catcavity {} figure={} field={} preset={} kappa={} g={} nb={} nbar={} phi={} \
             truncation={} gt_max={} gt_step={} time_axis={}",
            env!("CARGO_PKG_VERSION"),
            figure.name(),
            field,
            self.preset.name,
            self.preset.kappa,
            self.preset.g,
            self.nb,
            self.nbar,
            self.phi,
            truncation,
            self.gt_max,
            self.gt_step,
            if self.si_time { "seconds" } else { "gt" },
        )
    }

    fn axis(&self, gt: f64) -> f64 {
        if self.si_time {
            gt / self.preset.g
        } else {
            gt
        }
    }

    fn axis_name(&self) -> &'static str {
        if self.si_time {
            "t_s"
        } else {
            "gt"
        }
    }
}

/// Resolves the settings for every preset a figure draws.
pub fn resolve(figure: FigureId, section: &Section) -> Result<Vec<CurveSettings>> {
    let nb = section.nb.ok_or_else(|| {
        anyhow!(
            "the thermal photon number n_b is required: pass --nb or set `nb = ...` in the [{}] \
             section of the config (there is no default because the published figures do not \
             state it)",
            figure.name()
        )
    })?;
    if !(nb >= 0.0) {
        bail!("nb must be >= 0");
    }
    let presets = match &section.preset {
        Some(name) => vec![preset(name)?],
        None => figure.default_presets(),
    };
    presets
        .into_iter()
        .map(|p| {
            let s = CurveSettings {
                preset: p,
                nb,
                nbar: section.nbar.unwrap_or(p.nbar),
                phi: section.phi.unwrap_or(0.0),
                gt_max: section.gt_max.unwrap_or(p.gt_max),
                gt_step: section.gt_step.unwrap_or(p.gt_step),
                si_time: section.si_time.unwrap_or(false),
            };
            if !(s.gt_step > 0.0) || !(s.gt_max >= 0.0) {
                bail!("gt_step must be > 0 and gt_max >= 0");
            }
            Ok(s)
        })
        .collect()
}

/// `P_+(t)` and `P_{++}(t)` (with `t_B = 2t`) over the grid.
pub fn revival_curves(config: &ExperimentConfig, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let g = config.jc().g();
    grid.par_iter()
        .map(|&gt| {
            let t = gt / g;
            Ok((
                p_excited(config, t)?,
                p_joint(config, t, 2.0 * t, Outcome::Excited, Outcome::Excited)?,
            ))
        })
        .collect()
}

/// η(t) over the grid; `None` where undefined.
pub fn eta_curve(config: &ExperimentConfig, grid: &[f64]) -> Result<Vec<Option<f64>>> {
    let g = config.jc().g();
    grid.par_iter()
        .map(|&gt| Ok(eta_from_parts(&correlation_parts(config, gt / g)?)))
        .collect()
}

pub fn compute(figure: FigureId, settings: &[CurveSettings]) -> Result<Vec<Table>> {
    let mut tables = Vec::new();
    for s in settings {
        let grid = s.grid();
        match figure {
            FigureId::Fig1 | FigureId::Fig2 => {
                for (field, config) in [("coherent", s.coherent()?), ("cat", s.cat()?)] {
                    let curves = revival_curves(&config, &grid)
                        .with_context(|| format!("{} {field} curve", figure.name()))?;
                    let suffix = if settings.len() > 1 {
                        format!("_{}", s.preset.name)
                    } else {
                        String::new()
                    };
                    tables.push(Table {
                        name: format!("{}_{field}{suffix}", figure.name()),
                        metadata: s.metadata(figure, field, config.truncation()),
                        columns: vec![s.axis_name().into(), "P_plus".into(), "P_plusplus".into()],
                        rows: grid
                            .iter()
                            .zip(curves)
                            .map(|(&gt, (p, pp))| vec![Some(s.axis(gt)), Some(p), Some(pp)])
                            .collect(),
                    });
                }
            }
            FigureId::Fig3 => {
                let coherent = s.coherent()?;
                let eta_coh = eta_curve(&coherent, &grid)?;
                let eta_cat = eta_curve(&s.cat()?, &grid)?;
                tables.push(Table {
                    name: format!("fig3_{}", s.preset.name),
                    metadata: s.metadata(figure, "coherent+cat", coherent.truncation()),
                    columns: vec![s.axis_name().into(), "eta_coherent".into(), "eta_cat".into()],
                    rows: grid
                        .iter()
                        .zip(eta_coh.into_iter().zip(eta_cat))
                        .map(|(&gt, (a, b))| vec![Some(s.axis(gt)), a, b])
                        .collect(),
                });
            }
        }
    }
    Ok(tables)
}
