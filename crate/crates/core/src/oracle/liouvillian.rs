//! Sparse generator of the interaction-picture master equation
//!
//! `dρ/dt = −i[H, ρ] − κ(n_b+1)(a†aρ + ρa†a − 2aρa†) − κn_b(aa†ρ + ρaa† − 2a†ρa)`
//!
//! with `H = (Δ/2)σ_z + g(aσ₊ + a†σ₋)` and all operators truncated at `N`
//! photons, so the trace is conserved exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use super::density::{bare_index, bare_state, excitation, Atom, DensityMatrix};
use super::integrator::{Dopri5, StepStats};
use crate::dissipative::DampingParams;
use crate::jc::JcParams;
use crate::{Error, Result};

const INACTIVE: u32 = u32::MAX;

/// Which matrix elements are propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sectors {
    /// Every element.
    Full,
    /// Elements whose row and column carry the same excitation number. The
    /// dynamics never mixes excitation-difference sectors, and this block alone
    /// holds the atomic inversion, photon populations and dressed populations.
    PopulationBlock,
}

/// Default relative tolerance of the oracle integrator.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Per-step error target as a fraction of the caller's tolerance, so that the
/// error accumulated over a few thousand Rabi periods stays near `tol`.
const LOCAL_SAFETY: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct Oracle {
    truncation: usize,
    sectors: Sectors,
    active: Vec<(u32, u32)>,
    lookup: Vec<u32>,
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<Complex64>,
}

impl Oracle {
    pub fn new(jc: &JcParams, damping: &DampingParams, truncation: usize, sectors: Sectors) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::invalid("truncation", "must be >= 1"));
        }
        let d = 2 * (truncation + 1);
        let mut active = Vec::new();
        let mut lookup = vec![INACTIVE; d * d];
        for i in 0..d {
            for j in 0..d {
                if sectors == Sectors::Full || excitation(i) == excitation(j) {
                    lookup[i * d + j] = active.len() as u32;
                    active.push((i as u32, j as u32));
                }
            }
        }

        let g = jc.g();
        let half_detuning = 0.5 * jc.detuning();
        let kd = damping.kappa() * (damping.n_thermal() + 1.0);
        let ku = damping.kappa() * damping.n_thermal();
        let big_n = truncation;
        let energy = |i: usize| match bare_state(i).1 {
            Atom::Excited => half_detuning,
            Atom::Ground => -half_detuning,
        };
        // a†a and truncated aa† eigenvalues
        let number = |i: usize| bare_state(i).0 as f64;
        let anti_number = |i: usize| {
            let n = bare_state(i).0;
            if n < big_n {
                (n + 1) as f64
            } else {
                0.0
            }
        };
        let partner = |i: usize| -> Option<(usize, f64)> {
            match bare_state(i) {
                (n, Atom::Excited) if n < big_n => {
                    Some((bare_index(n + 1, Atom::Ground), g * ((n + 1) as f64).sqrt()))
                }
                (n, Atom::Ground) if n >= 1 => {
                    Some((bare_index(n - 1, Atom::Excited), g * (n as f64).sqrt()))
                }
                _ => None,
            }
        };

        let i_unit = Complex64::new(0.0, 1.0);
        let mut row_ptr = Vec::with_capacity(active.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for &(i, j) in &active {
            let (i, j) = (i as usize, j as usize);
            let mut push = |k: usize, l: usize, v: Complex64| {
                let idx = lookup[k * d + l];
                debug_assert!(idx != INACTIVE, "generator leaves the active sector");
                if idx != INACTIVE && v != Complex64::default() {
                    cols.push(idx);
                    vals.push(v);
                }
            };
            let diag = -i_unit * (energy(i) - energy(j))
                - kd * (number(i) + number(j))
                - ku * (anti_number(i) + anti_number(j));
            push(i, j, diag);
            if let Some((k, h)) = partner(i) {
                push(k, j, -i_unit * h);
            }
            if let Some((l, h)) = partner(j) {
                push(i, l, i_unit * h);
            }
            let (ni, ai) = bare_state(i);
            let (nj, aj) = bare_state(j);
            if ni < big_n && nj < big_n {
                let c = 2.0 * kd * (((ni + 1) * (nj + 1)) as f64).sqrt();
                push(bare_index(ni + 1, ai), bare_index(nj + 1, aj), Complex64::new(c, 0.0));
            }
            if ni >= 1 && nj >= 1 {
                let c = 2.0 * ku * ((ni * nj) as f64).sqrt();
                push(bare_index(ni - 1, ai), bare_index(nj - 1, aj), Complex64::new(c, 0.0));
            }
            row_ptr.push(cols.len() as u32);
        }

        Ok(Self {
            truncation,
            sectors,
            active,
            lookup,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn sectors(&self) -> Sectors {
        self.sectors
    }

    /// Number of propagated matrix elements.
    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    /// `out = L y` on the active elements.
    pub fn apply(&self, y: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let (a, b) = (self.row_ptr[r] as usize, self.row_ptr[r + 1] as usize);
            let mut acc = Complex64::default();
            for (&c, &v) in self.cols[a..b].iter().zip(&self.vals[a..b]) {
                acc += v * y[c as usize];
            }
            *o = acc;
        }
    }

    fn gather(&self, rho: &DensityMatrix) -> Result<Vec<Complex64>> {
        if rho.truncation() != self.truncation {
            return Err(Error::invalid("rho", "truncation does not match the oracle"));
        }
        Ok(self
            .active
            .iter()
            .map(|&(i, j)| rho.get(i as usize, j as usize))
            .collect())
    }

    fn scatter(&self, y: &[Complex64], time: f64) -> DensityMatrix {
        let mut rho = DensityMatrix::zeros(self.truncation, time);
        for (&(i, j), &v) in self.active.iter().zip(y) {
            rho.set(i as usize, j as usize, v);
        }
        rho
    }

    /// Projects a state onto the propagated sectors.
    pub fn restrict(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(self.scatter(&self.gather(rho)?, rho.time()))
    }

    /// Samples the trajectory at the sorted absolute `times` (each ≥ the
    /// state's own time), handing each sample to `observe`.
    pub fn sample<O>(&self, rho0: &DensityMatrix, times: &[f64], tol: f64, mut observe: O) -> Result<StepStats>
    where
        O: FnMut(usize, &DensityMatrix),
    {
        let mut y = self.gather(rho0)?;
        if !(tol > 0.0) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        let solver = Dopri5::new(tol * LOCAL_SAFETY)?;
        solver.run(
            |_, y, dy| self.apply(y, dy),
            rho0.time(),
            &mut y,
            times,
            |idx, t, y| observe(idx, &self.scatter(y, t)),
        )
    }

    pub fn trajectory(&self, rho0: &DensityMatrix, times: &[f64], tol: f64) -> Result<Vec<DensityMatrix>> {
        let mut out = Vec::with_capacity(times.len());
        self.sample(rho0, times, tol, |_, rho| out.push(rho.clone()))?;
        Ok(out)
    }

    /// State after a further `t` seconds.
    pub fn evolve(&self, rho0: &DensityMatrix, t: f64, tol: f64) -> Result<DensityMatrix> {
        if !(t >= 0.0) {
            return Err(Error::NegativeTime(t));
        }
        let mut out = None;
        self.sample(rho0, &[rho0.time() + t], tol, |_, rho| out = Some(rho.clone()))?;
        out.ok_or(Error::Inconsistent {
            what: "missing final sample",
            value: t,
        })
    }

    #[doc(hidden)]
    pub fn lookup(&self, i: usize, j: usize) -> Option<usize> {
        let d = 2 * (self.truncation + 1);
        match self.lookup[i * d + j] {
            INACTIVE => None,
            idx => Some(idx as usize),
        }
    }
}

/// One-shot full-matrix integration of `rho0` for `t` seconds.
pub fn integrate(
    rho0: &DensityMatrix,
    jc: &JcParams,
    damping: &DampingParams,
    t: f64,
    tol: f64,
) -> Result<DensityMatrix> {
    Oracle::new(jc, damping, rho0.truncation(), Sectors::Full)?.evolve(rho0, t, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::density::{build_initial_state, InitialField};
    use crate::photon_states::CatSpec;

    #[test]
    fn population_block_is_small() {
        let jc = JcParams::resonant(1.0).unwrap();
        let d = DampingParams::new(0.1, 0.1).unwrap();
        let oracle = Oracle::new(&jc, &d, 20, Sectors::PopulationBlock).unwrap();
        assert_eq!(oracle.len(), 4 * 20 + 2);
        assert!(oracle.lookup(0, 3).is_some());
        assert!(oracle.lookup(0, 1).is_none());
    }

    #[test]
    fn generator_is_trace_free() {
        let jc = JcParams::new(1.3, 0.2, 0.0).unwrap();
        let d = DampingParams::new(0.7, 0.4).unwrap();
        let oracle = Oracle::new(&jc, &d, 6, Sectors::Full).unwrap();
        let dim = 14;
        // L†(I) = 0: summing the diagonal rows must cancel for every column
        let mut column_sums = vec![Complex64::default(); oracle.len()];
        for i in 0..dim {
            let r = oracle.lookup(i, i).unwrap();
            for k in oracle.row_ptr[r] as usize..oracle.row_ptr[r + 1] as usize {
                column_sums[oracle.cols[k] as usize] += oracle.vals[k];
            }
        }
        assert!(column_sums.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn sectors_agree_on_populations() {
        let jc = JcParams::resonant(1.0).unwrap();
        let d = DampingParams::new(0.05, 0.2).unwrap();
        let rho0 = build_initial_state(&InitialField::Cat(CatSpec::new(2.0, 0.7).unwrap()), 16).unwrap();
        let full = Oracle::new(&jc, &d, 16, Sectors::Full).unwrap().evolve(&rho0, 3.0, 1e-10).unwrap();
        let block = Oracle::new(&jc, &d, 16, Sectors::PopulationBlock).unwrap();
        let part = block.evolve(&block.restrict(&rho0).unwrap(), 3.0, 1e-10).unwrap();
        for (a, b) in full.photon_populations().iter().zip(part.photon_populations()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((full.p_excited() - part.p_excited()).abs() < 1e-9);
        assert!((full.trace().re - 1.0).abs() < 1e-9);
        assert!(full.hermiticity_defect() < 1e-9);
        assert!(full.is_positive_within(1e-8));
    }
}
