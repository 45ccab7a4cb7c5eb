//! The damping-only frame `W(t) = e^{iHt} ρ e^{−iHt}` in the dressed basis.
//!
//! Basis order: `ψ₀ = |0,−⟩`, then `ψ⁺_n, ψ⁻_n` for `n = 0..N−1`, then the
//! unpaired `|N,+⟩` whose partner lies outside the truncation.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use super::density::{bare_index, Atom, DensityMatrix};
use crate::jc::{Branch, DressedFrame};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WFrameMatrix {
    truncation: usize,
    data: Vec<Complex64>,
    time: f64,
}

/// Position of a dressed state in the [`WFrameMatrix`] basis.
#[inline]
pub fn dressed_index(branch: Branch, n: usize) -> usize {
    match branch {
        Branch::Plus => 1 + 2 * n,
        Branch::Minus => 2 + 2 * n,
    }
}

/// Bare components `(index, amplitude)` of each dressed basis vector, with its
/// interaction-picture energy.
fn dressed_basis(truncation: usize, g: f64) -> Vec<([(usize, f64); 2], f64)> {
    let r = core::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(2 * truncation + 2);
    out.push(([(bare_index(0, Atom::Ground), 1.0), (0, 0.0)], 0.0));
    for n in 0..truncation {
        let up = bare_index(n + 1, Atom::Ground);
        let ex = bare_index(n, Atom::Excited);
        let e = g * ((n + 1) as f64).sqrt();
        // ψ⁺ = (|n+1,−⟩ + |n,+⟩)/√2, ψ⁻ = (−|n+1,−⟩ + |n,+⟩)/√2
        out.push(([(up, r), (ex, r)], e));
        out.push(([(up, -r), (ex, r)], -e));
    }
    out.push(([(bare_index(truncation, Atom::Excited), 1.0), (0, 0.0)], 0.0));
    out
}

/// Transforms an interaction-picture state into the W frame at time `t`.
pub fn to_w_frame(rho: &DensityMatrix, frame: &DressedFrame, t: f64) -> Result<WFrameMatrix> {
    if !frame.params().is_resonant() {
        return Err(Error::OffResonance(frame.params().detuning()));
    }
    if frame.truncation() < rho.truncation() {
        return Err(Error::invalid("frame", "covers fewer doublets than the state"));
    }
    let big_n = rho.truncation();
    let basis = dressed_basis(big_n, frame.params().g());
    let d = basis.len();
    let phases: Vec<Complex64> = basis.iter().map(|(_, e)| Complex64::from_polar(1.0, e * t)).collect();
    let mut data = vec![Complex64::default(); d * d];
    for (a, (va, _)) in basis.iter().enumerate() {
        for (b, (vb, _)) in basis.iter().enumerate() {
            let mut acc = Complex64::default();
            for &(k, ua) in va {
                if ua == 0.0 {
                    continue;
                }
                for &(l, ub) in vb {
                    if ub != 0.0 {
                        acc += rho.get(k, l) * (ua * ub);
                    }
                }
            }
            data[a * d + b] = phases[a] * acc * phases[b].conj();
        }
    }
    Ok(WFrameMatrix {
        truncation: big_n,
        data,
        time: t,
    })
}

impl WFrameMatrix {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        2 * (self.truncation + 1)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.data[a * self.dim() + b]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in a..d {
                worst = worst.max((self.get(a, b) - self.get(b, a).conj()).norm());
            }
        }
        worst
    }

    /// Largest element modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `W_g = ⟨ψ₀|W|ψ₀⟩`.
    pub fn ground(&self) -> Complex64 {
        self.get(0, 0)
    }

    /// `⟨ψ^s_n|W|ψ^s_n⟩`; zero outside the retained doublets.
    pub fn diagonal(&self, branch: Branch, n: usize) -> Complex64 {
        self.element(branch, n, branch, n)
    }

    /// `W^{+−}_n = ⟨ψ⁺_n|W|ψ⁻_n⟩`.
    pub fn coherence(&self, n: usize) -> Complex64 {
        self.element(Branch::Plus, n, Branch::Minus, n)
    }

    pub fn element(&self, a: Branch, n: usize, b: Branch, m: usize) -> Complex64 {
        if n >= self.truncation || m >= self.truncation {
            return Complex64::default();
        }
        self.get(dressed_index(a, n), dressed_index(b, m))
    }

    /// `F_n = W^{++}_n + W^{−−}_n`.
    pub fn dressed_sum(&self, n: usize) -> f64 {
        (self.diagonal(Branch::Plus, n) + self.diagonal(Branch::Minus, n)).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissipative::DampingParams;
    use crate::jc::{build_dressed_frame, JcParams};
    use crate::oracle::density::{build_initial_state, InitialField};
    use crate::oracle::liouvillian::{Oracle, Sectors};

    #[test]
    fn initial_frame_is_a_basis_change() {
        let rho = build_initial_state(&InitialField::Coherent(2.0), 20).unwrap();
        let frame = build_dressed_frame(JcParams::resonant(3.0).unwrap(), 20).unwrap();
        let w = to_w_frame(&rho, &frame, 0.0).unwrap();
        assert!((w.trace() - rho.trace()).norm() < 1e-14);
        let (f, f_ground) = rho.dressed_sums();
        for (n, fn_) in f.iter().enumerate() {
            assert!((w.dressed_sum(n) - fn_).abs() < 1e-14);
            // excited atom: ⟨ψ⁺|ρ|ψ⁻⟩ = ½ p_n
            assert!((w.coherence(n).re - 0.5 * fn_).abs() < 1e-14);
        }
        assert_eq!(w.ground().re, 0.5 * f_ground);
        assert!(w.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn undamped_frame_is_frozen() {
        let g = 2.0;
        let jc = JcParams::resonant(g).unwrap();
        let frame = build_dressed_frame(jc, 12).unwrap();
        let oracle = Oracle::new(&jc, &DampingParams::undamped(), 12, Sectors::Full).unwrap();
        let rho0 = build_initial_state(&InitialField::Coherent(1.5), 12).unwrap();
        let w0 = to_w_frame(&rho0, &frame, 0.0).unwrap();
        let rho = oracle.evolve(&rho0, 7.3, 1e-11).unwrap();
        let w = to_w_frame(&rho, &frame, 7.3).unwrap();
        for a in 0..w.dim() {
            for b in 0..w.dim() {
                assert!((w.get(a, b) - w0.get(a, b)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn off_resonance_is_rejected() {
        let rho = build_initial_state(&InitialField::Coherent(1.0), 8).unwrap();
        let frame = build_dressed_frame(JcParams::new(1.0, 0.5, 0.0).unwrap(), 8).unwrap();
        assert_eq!(to_w_frame(&rho, &frame, 0.0).unwrap_err(), Error::OffResonance(0.5));
    }
}
