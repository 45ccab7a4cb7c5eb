//! `oracle`: prints a master-equation trajectory as `t,observable,value` rows.

use std::io::Write;

use anyhow::{anyhow, bail, Result};

use catcavity_core::dissipative::DampingParams;
use catcavity_core::jc::JcParams;
use catcavity_core::oracle::{build_initial_state, InitialField, Oracle, Sectors, DEFAULT_TOLERANCE};
use catcavity_core::photon_states::{default_truncation, CatSpec};

use crate::config::Section;
use crate::presets::{preset, BENSON97};

pub const SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct DumpSettings {
    pub kappa: f64,
    pub g: f64,
    pub nb: f64,
    pub nbar: f64,
    pub phi: f64,
    pub t_max: f64,
}

impl DumpSettings {
    pub fn resolve(section: &Section) -> Result<Self> {
        let nb = section
            .nb
            .ok_or_else(|| anyhow!("the thermal photon number n_b is required: pass --nb or set it in [oracle]"))?;
        let p = match &section.preset {
            Some(name) => preset(name)?,
            None => BENSON97,
        };
        let s = Self {
            kappa: p.kappa,
            g: p.g,
            nb,
            nbar: section.nbar.unwrap_or(4.0),
            phi: section.phi.unwrap_or(0.0),
            t_max: section.t_max.unwrap_or(60.0 / p.g),
        };
        if !(s.t_max > 0.0) {
            bail!("t_max must be positive");
        }
        Ok(s)
    }
}

/// Writes `p_excited`, `mean_photons`, `field_parity` and `F_ground` for an
/// excited atom entering a cat field, at `SAMPLES + 1` evenly spaced times.
pub fn dump<W: Write>(s: &DumpSettings, mut out: W) -> Result<()> {
    let jc = JcParams::resonant(s.g)?;
    let damping = DampingParams::new(s.kappa, s.nb)?;
    let n = default_truncation(s.nbar);
    let oracle = Oracle::new(&jc, &damping, n, Sectors::PopulationBlock)?;
    let rho0 = oracle.restrict(&build_initial_state(&InitialField::Cat(CatSpec::new(s.nbar, s.phi)?), n)?)?;
    let times: Vec<f64> = (0..=SAMPLES).map(|k| k as f64 * s.t_max / SAMPLES as f64).collect();
    writeln!(
        out,
        "# catcavity {} oracle kappa={} g={} nb={} nbar={} phi={} truncation={} tol={}",
        env!("CARGO_PKG_VERSION"),
        s.kappa,
        s.g,
        s.nb,
        s.nbar,
        s.phi,
        n,
        DEFAULT_TOLERANCE
    )?;
    writeln!(out, "t,observable,value")?;
    let mut io_error = None;
    oracle.sample(&rho0, &times, DEFAULT_TOLERANCE, |_, rho| {
        let t = rho.time();
        let rows = [
            ("p_excited", rho.p_excited()),
            ("mean_photons", rho.mean_photons()),
            ("field_parity", rho.field_parity()),
            ("F_ground", rho.dressed_sums().1),
        ];
        for (name, v) in rows {
            if let Err(e) = writeln!(out, "{t:e},{name},{v:e}") {
                io_error.get_or_insert(e);
            }
        }
    })?;
    match io_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}
