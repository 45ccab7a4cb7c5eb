//! Exact equations of motion of the dressed W elements, checked as residuals
//! against finite-difference derivatives of an oracle trajectory.
//!
//! With `Ω_n = 2g√(n+1)`, `κ↓ = 2κ(n_b+1)`, `κ↑ = 2κn_b` the diagonal elements obey
//!
//! ```text
//! Ẇ^{ss}_n = κ↓[Γ₊,ₙ₊₁W^{ss}_{n+1} + Γ₋,ₙ₊₁W^{s̄s̄}_{n+1} − (n+½)W^{ss}_n
//!              + ½Re(e^{−iΩ_n t}W^{+−}_n − e^{−iΩ_{n+1}t}W^{+−}_{n+1})]
//!          + κ↑[Γ₊,ₙW^{ss}_{n−1} + Γ₋,ₙW^{s̄s̄}_{n−1} − (n+3/2)W^{ss}_n
//!              + ½Re(e^{−iΩ_n t}W^{+−}_n − e^{−iΩ_{n−1}t}W^{+−}_{n−1})]
//! ```
//!
//! where the `n = 0` gain term from below is `½W_g` (a single ground state
//! instead of a doublet). The coherences `W^{+−}_n` carry the explicit phases
//! `e^{2igt(√(n+1)∓√(n±1+1))}` coupling them to neighbouring doublets.

use alloc::vec::Vec;

use num_complex::Complex64;
// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use super::wframe::WFrameMatrix;
use crate::dissipative::DampingParams;
use crate::jc::{gamma_coefficients, Branch, DressedFrame};
use crate::{Error, Result};

/// Doublets this close to the truncation are excluded from the check.
pub const TRUNCATION_MARGIN: usize = 2;

/// Largest residual per equation family over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WResidualReport {
    /// Dressed diagonal elements `W^{±±}_n`.
    pub diagonal: f64,
    /// Intra-doublet coherences `W^{+−}_n`.
    pub coherence: f64,
    /// The ground element `W_g`.
    pub ground: f64,
    /// `max |W_ab|` over the trajectory.
    pub w_norm: f64,
    /// Number of time points at which the equations were evaluated.
    pub points: usize,
}

impl WResidualReport {
    pub fn max(&self) -> f64 {
        self.diagonal.max(self.coherence).max(self.ground)
    }
}

/// Right-hand sides of the W equations at time `t`.
pub struct WEquations<'a> {
    g: f64,
    kd: f64,
    ku: f64,
    w: &'a WFrameMatrix,
    t: f64,
}

impl<'a> WEquations<'a> {
    pub fn new(g: f64, damping: &DampingParams, w: &'a WFrameMatrix) -> Self {
        Self {
            g,
            kd: 2.0 * damping.kappa() * (damping.n_thermal() + 1.0),
            ku: 2.0 * damping.kappa() * damping.n_thermal(),
            w,
            t: w.time(),
        }
    }

    fn rabi(&self, n: usize) -> f64 {
        2.0 * self.g * ((n + 1) as f64).sqrt()
    }

    fn rot(&self, omega: f64) -> Complex64 {
        Complex64::from_polar(1.0, omega * self.t)
    }

    fn pm(&self, n: usize) -> Complex64 {
        self.w.coherence(n)
    }

    fn mp(&self, n: usize) -> Complex64 {
        self.w.element(Branch::Minus, n, Branch::Plus, n)
    }

    fn sum(&self, n: usize) -> Complex64 {
        self.w.diagonal(Branch::Plus, n) + self.w.diagonal(Branch::Minus, n)
    }

    pub fn diagonal(&self, branch: Branch, n: usize) -> Complex64 {
        let w = self.w;
        let nf = n as f64;
        let (gp1, gm1) = gamma_coefficients(n + 1);
        let osc_down = self.rot(-self.rabi(n)) * self.pm(n) - self.rot(-self.rabi(n + 1)) * self.pm(n + 1);
        let down = w.diagonal(branch, n + 1) * gp1 + w.diagonal(branch.flip(), n + 1) * gm1
            - w.diagonal(branch, n) * (nf + 0.5)
            + 0.5 * osc_down.re;
        let up = if n == 0 {
            w.ground() * 0.5 - w.diagonal(branch, 0) * 1.5 + 0.5 * (self.rot(-self.rabi(0)) * self.pm(0)).re
        } else {
            let (gp, gm) = gamma_coefficients(n);
            let osc = self.rot(-self.rabi(n)) * self.pm(n) - self.rot(-self.rabi(n - 1)) * self.pm(n - 1);
            w.diagonal(branch, n - 1) * gp + w.diagonal(branch.flip(), n - 1) * gm
                - w.diagonal(branch, n) * (nf + 1.5)
                + 0.5 * osc.re
        };
        down * self.kd + up * self.ku
    }

    pub fn coherence(&self, n: usize) -> Complex64 {
        let nf = n as f64;
        let s0 = ((n + 1) as f64).sqrt();
        let s1 = ((n + 2) as f64).sqrt();
        let (gp1, gm1) = gamma_coefficients(n + 1);
        let down = self.pm(n) * (nf + 0.5)
            - self.rot(self.rabi(n)) * (self.sum(n) - self.sum(n + 1)) * 0.25
            - self.rot(2.0 * self.g * (s0 - s1)) * self.pm(n + 1) * gp1
            - self.rot(2.0 * self.g * (s0 + s1)) * self.mp(n + 1) * gm1;
        let up = if n == 0 {
            self.pm(0) * 1.5 + self.rot(self.rabi(0)) * (self.w.ground() * 0.5 - self.sum(0) * 0.25)
        } else {
            let sm = (n as f64).sqrt();
            let (gp, gm) = gamma_coefficients(n);
            self.pm(n) * (nf + 1.5)
                - self.rot(2.0 * self.g * (s0 - sm)) * self.pm(n - 1) * gp
                - self.rot(2.0 * self.g * (s0 + sm)) * self.mp(n - 1) * gm
                - self.rot(self.rabi(n)) * (self.sum(n) - self.sum(n - 1)) * 0.25
        };
        -(down * self.kd + up * self.ku)
    }

    pub fn ground(&self) -> Complex64 {
        let osc = (self.rot(-self.rabi(0)) * self.pm(0)).re;
        (self.sum(0) - 2.0 * osc) * (0.5 * self.kd) - self.w.ground() * self.ku
    }
}

/// Secular part of the diagonal equations: all terms carrying an explicit
/// Rabi phase removed.
pub fn secular_diagonal(damping: &DampingParams, w: &WFrameMatrix, branch: Branch, n: usize) -> Complex64 {
    let kd = 2.0 * damping.kappa() * (damping.n_thermal() + 1.0);
    let ku = 2.0 * damping.kappa() * damping.n_thermal();
    let nf = n as f64;
    let (gp1, gm1) = gamma_coefficients(n + 1);
    let down = w.diagonal(branch, n + 1) * gp1 + w.diagonal(branch.flip(), n + 1) * gm1 - w.diagonal(branch, n) * (nf + 0.5);
    let up = if n == 0 {
        w.ground() * 0.5 - w.diagonal(branch, 0) * 1.5
    } else {
        let (gp, gm) = gamma_coefficients(n);
        w.diagonal(branch, n - 1) * gp + w.diagonal(branch.flip(), n - 1) * gm - w.diagonal(branch, n) * (nf + 1.5)
    };
    down * kd + up * ku
}

/// Compares the W equations with five-point derivatives along a trajectory
/// sampled at uniform spacing `dt`.
pub fn w_equation_residuals(
    trajectory: &[WFrameMatrix],
    frame: &DressedFrame,
    damping: &DampingParams,
    dt: f64,
) -> Result<WResidualReport> {
    if !frame.params().is_resonant() {
        return Err(Error::OffResonance(frame.params().detuning()));
    }
    if trajectory.len() < 5 {
        return Err(Error::invalid("trajectory", "needs at least five samples"));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let g = frame.params().g();
    let big_n = trajectory[0].truncation();
    let top = big_n.saturating_sub(TRUNCATION_MARGIN);
    let mut report = WResidualReport {
        w_norm: trajectory.iter().map(WFrameMatrix::max_norm).fold(0.0, f64::max),
        ..WResidualReport::default()
    };
    let derivative = |k: usize, f: &dyn Fn(&WFrameMatrix) -> Complex64| {
        (f(&trajectory[k - 2]) - f(&trajectory[k - 1]) * 8.0 + f(&trajectory[k + 1]) * 8.0 - f(&trajectory[k + 2]))
            / (12.0 * dt)
    };
    for (k, w) in trajectory.iter().enumerate().take(trajectory.len() - 2).skip(2) {
        let eq = WEquations::new(g, damping, w);
        for n in 0..top {
            for branch in [Branch::Plus, Branch::Minus] {
                let lhs = derivative(k, &|m: &WFrameMatrix| m.diagonal(branch, n));
                report.diagonal = report.diagonal.max((lhs - eq.diagonal(branch, n)).norm());
            }
            let lhs = derivative(k, &|m: &WFrameMatrix| m.coherence(n));
            report.coherence = report.coherence.max((lhs - eq.coherence(n)).norm());
        }
        let lhs = derivative(k, &|m: &WFrameMatrix| m.ground());
        report.ground = report.ground.max((lhs - eq.ground()).norm());
        report.points += 1;
    }
    Ok(report)
}

/// Uniform sample times `t0 + k·dt`, `k = 0..count`.
pub fn uniform_times(t0: f64, dt: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| t0 + k as f64 * dt).collect()
}
