//! Jaynes–Cummings eigensystem in the rotating-wave approximation.
//!
//! Dressed states within the n-th doublet:
//!
//! ```text
//! |ψ⁺_n⟩ =  cos θ_n |n+1,−⟩ + sin θ_n |n,+⟩
//! |ψ⁻_n⟩ = −sin θ_n |n+1,−⟩ + cos θ_n |n,+⟩
//! ```
//!
//! with the ground state `|ψ₀⟩ = |0,−⟩` outside every doublet. The ladder
//! relations in the dressed basis are only provided at resonance (θ = π/4).

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Coupling, detuning `Δω = ω₀ − ω` and cavity frequency ω, all in s⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcParams {
    g: f64,
    detuning: f64,
    omega: f64,
}

impl JcParams {
    pub fn new(g: f64, detuning: f64, omega: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::invalid("g", "must be finite and > 0"));
        }
        if !detuning.is_finite() || !omega.is_finite() {
            return Err(Error::invalid("detuning/omega", "must be finite"));
        }
        Ok(Self { g, detuning, omega })
    }

    /// Resonant coupling with the optical frequency left unspecified (ω = 0); ω
    /// cancels from every observable computed in this crate.
    pub fn resonant(g: f64) -> Result<Self> {
        Self::new(g, 0.0, 0.0)
    }

    /// Zero coupling, for oracle reference runs of the bare damped field.
    pub fn uncoupled() -> Self {
        Self {
            g: 0.0,
            detuning: 0.0,
            omega: 0.0,
        }
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn is_resonant(&self) -> bool {
        self.detuning == 0.0
    }

    pub(crate) fn require_resonance(&self) -> Result<()> {
        if self.is_resonant() {
            Ok(())
        } else {
            Err(Error::OffResonance(self.detuning))
        }
    }
}

/// Which member of a dressed doublet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// `Γ_{±,n} = (√(n+1) ± √n)² / 4`.
pub fn gamma_coefficients(n: usize) -> (f64, f64) {
    let a = ((n + 1) as f64).sqrt();
    let b = (n as f64).sqrt();
    ((a + b) * (a + b) / 4.0, (a - b) * (a - b) / 4.0)
}

/// Eigensystem data for doublets `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedFrame {
    params: JcParams,
    mixing_angles: Vec<f64>,
    energies_plus: Vec<f64>,
    energies_minus: Vec<f64>,
    gap: Vec<f64>,
    gamma_plus: Vec<f64>,
    gamma_minus: Vec<f64>,
    ground_energy: f64,
}

/// Builds the dressed frame for doublets `0..=truncation`.
pub fn build_dressed_frame(params: JcParams, truncation: usize) -> Result<DressedFrame> {
    if truncation < 1 {
        return Err(Error::invalid("truncation", "must be >= 1"));
    }
    let JcParams { g, detuning, omega } = params;
    let len = truncation + 1;
    let mut frame = DressedFrame {
        params,
        mixing_angles: Vec::with_capacity(len),
        energies_plus: Vec::with_capacity(len),
        energies_minus: Vec::with_capacity(len),
        gap: Vec::with_capacity(len),
        gamma_plus: Vec::with_capacity(len),
        gamma_minus: Vec::with_capacity(len),
        // ω₀ = ω + Δω
        ground_energy: -(omega + detuning) / 2.0,
    };
    for n in 0..len {
        let coupling = 2.0 * g * ((n + 1) as f64).sqrt();
        let gap = detuning.hypot(coupling);
        // tan θ = 2g√(n+1) / (Δω + √(Δω² + 4g²(n+1))); rewrite the denominator
        // for Δω < 0 to avoid cancellation.
        let denom = if detuning >= 0.0 {
            detuning + gap
        } else {
            coupling * coupling / (gap - detuning)
        };
        let centre = omega * (n as f64 + 0.5);
        frame.mixing_angles.push(coupling.atan2(denom));
        frame.energies_plus.push(centre + gap / 2.0);
        frame.energies_minus.push(centre - gap / 2.0);
        frame.gap.push(gap);
        let (gp, gm) = gamma_coefficients(n);
        frame.gamma_plus.push(gp);
        frame.gamma_minus.push(gm);
    }
    Ok(frame)
}

impl DressedFrame {
    pub fn params(&self) -> &JcParams {
        &self.params
    }

    pub fn truncation(&self) -> usize {
        self.mixing_angles.len() - 1
    }

    pub fn mixing_angles(&self) -> &[f64] {
        &self.mixing_angles
    }

    pub fn energies_plus(&self) -> &[f64] {
        &self.energies_plus
    }

    pub fn energies_minus(&self) -> &[f64] {
        &self.energies_minus
    }

    /// `ΔE_n = √(Δω² + 4g²(n+1))`.
    pub fn gap(&self) -> &[f64] {
        &self.gap
    }

    pub fn gamma_plus(&self) -> &[f64] {
        &self.gamma_plus
    }

    pub fn gamma_minus(&self) -> &[f64] {
        &self.gamma_minus
    }

    /// `E₀ = −ω₀/2`.
    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    /// Energy of `|ψ^±_n⟩` relative to the free part `ω(n + ½)`, i.e. the
    /// eigenvalue of the interaction-picture Hamiltonian.
    pub fn interaction_energy(&self, branch: Branch, n: usize) -> f64 {
        branch.sign() * self.gap[n] / 2.0
    }
}

/// Target of a ladder-operator action in the dressed basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DressedLevel {
    Doublet { branch: Branch, n: usize },
    Ground,
}

/// One `(coefficient, target)` term of a ladder action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderTerm {
    pub coefficient: f64,
    pub target: DressedLevel,
}

/// Coefficients `(c₊, c₋)` of `a† |ψ^s_n⟩ = c₊|ψ⁺_{n+1}⟩ + c₋|ψ⁻_{n+1}⟩` at resonance.
pub fn creation_coefficients(branch: Branch, n: usize) -> (f64, f64) {
    let lo = ((n + 1) as f64).sqrt();
    let hi = ((n + 2) as f64).sqrt();
    let s = branch.sign();
    (0.5 * (lo + s * hi), 0.5 * (lo - s * hi))
}

/// Coefficients `(c₊, c₋)` of `a |ψ^s_n⟩ = c₊|ψ⁺_{n−1}⟩ + c₋|ψ⁻_{n−1}⟩` at resonance.
///
/// For `n = 0` the formal targets `ψ^±_{−1}` both collapse onto the ground state:
/// `ψ⁺_{−1} ↦ |ψ₀⟩/√2`, `ψ⁻_{−1} ↦ −|ψ₀⟩/√2`.
pub fn annihilation_coefficients(branch: Branch, n: usize) -> (f64, f64) {
    let lo = (n as f64).sqrt();
    let hi = ((n + 1) as f64).sqrt();
    let s = branch.sign();
    (0.5 * (lo + s * hi), 0.5 * (lo - s * hi))
}

/// `a†|ψ^±_n⟩` expressed on the `n+1` doublet.
pub fn apply_creation_dressed(
    frame: &DressedFrame,
    branch: Branch,
    n: usize,
) -> Result<[LadderTerm; 2]> {
    frame.params.require_resonance()?;
    let (cp, cm) = creation_coefficients(branch, n);
    Ok([
        LadderTerm {
            coefficient: cp,
            target: DressedLevel::Doublet {
                branch: Branch::Plus,
                n: n + 1,
            },
        },
        LadderTerm {
            coefficient: cm,
            target: DressedLevel::Doublet {
                branch: Branch::Minus,
                n: n + 1,
            },
        },
    ])
}

/// `a|ψ^±_n⟩` expressed on the `n−1` doublet, or on the ground state for `n = 0`.
pub fn apply_annihilation_dressed(
    frame: &DressedFrame,
    branch: Branch,
    n: usize,
) -> Result<[LadderTerm; 2]> {
    frame.params.require_resonance()?;
    let (cp, cm) = annihilation_coefficients(branch, n);
    if n == 0 {
        return Ok([
            LadderTerm {
                coefficient: cp * FRAC_1_SQRT_2,
                target: DressedLevel::Ground,
            },
            LadderTerm {
                coefficient: -cm * FRAC_1_SQRT_2,
                target: DressedLevel::Ground,
            },
        ]);
    }
    Ok([
        LadderTerm {
            coefficient: cp,
            target: DressedLevel::Doublet {
                branch: Branch::Plus,
                n: n - 1,
            },
        },
        LadderTerm {
            coefficient: cm,
            target: DressedLevel::Doublet {
                branch: Branch::Minus,
                n: n - 1,
            },
        },
    ])
}
