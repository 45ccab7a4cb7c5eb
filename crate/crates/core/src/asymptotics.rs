//! Poisson-resummed form of `P_+(t)` for a cat field with large mean photon
//! number.
//!
//! The sum over Fock numbers is traded for a sum over revival orders ν. The
//! integer orders are the ordinary coherent-state revivals at
//! `gt ≈ 2πν√n̄`; the half-integer orders come from the interference between
//! the two cat branches and appear weighted by `cos φ`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};

// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::dissipative::DampingParams;
use crate::numeric::{ln_gamma, CompensatedSum};
use crate::{Error, Result, ValidityWarning};

/// Below this mean photon number the stationary-phase terms are unreliable.
pub const MIN_NBAR: f64 = 10.0;

/// `α_n̄ / g` above this is flagged.
pub const MAX_DAMPING_OVER_G: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct ResumParams {
    nbar: f64,
    phase: f64,
    max_order: usize,
    damping: DampingParams,
    g: f64,
}

impl ResumParams {
    pub fn new(nbar: f64, phase: f64, max_order: usize, damping: DampingParams, g: f64) -> Result<Self> {
        if !(nbar > 0.0) || !nbar.is_finite() {
            return Err(Error::invalid("nbar", "must be positive and finite"));
        }
        if !phase.is_finite() {
            return Err(Error::invalid("phase", "must be finite"));
        }
        if max_order == 0 {
            return Err(Error::invalid("max_order", "must be at least 1"));
        }
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::invalid("g", "must be positive and finite"));
        }
        Ok(Self {
            nbar,
            phase,
            max_order,
            damping,
            g,
        })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn damping(&self) -> &DampingParams {
        &self.damping
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn with_max_order(&self, max_order: usize) -> Result<Self> {
        Self::new(self.nbar, self.phase, max_order, self.damping, self.g)
    }

    /// Damping rate of the oscillating part at `n = n̄`.
    pub fn alpha_at_mean(&self) -> f64 {
        let nb = self.damping.n_thermal();
        2.0 * self.damping.kappa() * (2.0 * nb * (1.0 + self.nbar) + self.nbar + 0.5)
    }

    pub fn validity_warnings(&self) -> Vec<ValidityWarning> {
        let mut out = Vec::new();
        let alpha = self.alpha_at_mean();
        if alpha > MAX_DAMPING_OVER_G * self.g {
            out.push(ValidityWarning::StrongDamping { alpha, g: self.g });
        }
        if self.nbar < MIN_NBAR {
            out.push(ValidityWarning::SmallMeanPhotonNumber { nbar: self.nbar });
        }
        out
    }
}

/// Poisson weight at a real argument, `n̄^x e^{−n̄} / Γ(x+1)`.
pub fn fractional_poisson(nbar: f64, x: f64) -> f64 {
    if x == 0.0 {
        return (-nbar).exp();
    }
    (x * nbar.ln() - nbar - ln_gamma(x + 1.0)).exp()
}

/// `w₀(t) = e^{−g²t²/2} cos(2gt√n̄)`: the initial collapse.
pub fn initial_collapse_wave(params: &ResumParams, t: f64) -> f64 {
    let gt = params.g * t;
    (-0.5 * gt * gt).exp() * (2.0 * gt * params.nbar.sqrt()).cos()
}

/// Revival wave of order `ν > 0`:
/// `w_ν(t) = p(g²t²/4π²ν²) · gt/(π√(2ν³)) · cos(g²t²/(2πν) − π/4)`.
pub fn revival_wave(params: &ResumParams, nu: f64, t: f64) -> f64 {
    revival_envelope(params, nu, t) * ((params.g * t).powi(2) / (2.0 * PI * nu) - FRAC_PI_4).cos()
}

/// The non-oscillating factor of [`revival_wave`].
pub fn revival_envelope(params: &ResumParams, nu: f64, t: f64) -> f64 {
    let gt = params.g * t;
    let x = gt * gt / (4.0 * PI * PI * nu * nu);
    fractional_poisson(params.nbar, x) * gt / (PI * (2.0 * nu * nu * nu).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resummed {
    pub value: f64,
    pub warnings: Vec<ValidityWarning>,
}

/// `½e^{−2κn_b t} + ½e^{−α_n̄ t}[w₀ + Σ_{ν=1}^{N}(w_ν − w_{ν−½} cos φ)]`.
pub fn resummed_p_excited(params: &ResumParams, t: f64) -> Result<Resummed> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    let kappa = params.damping.kappa();
    let nb = params.damping.n_thermal();
    let cos_phi = params.phase.cos();
    let mut waves = CompensatedSum::new();
    waves.add(initial_collapse_wave(params, t));
    if t > 0.0 {
        for nu in 1..=params.max_order {
            let nu = nu as f64;
            waves.add(revival_wave(params, nu, t));
            waves.add(-cos_phi * revival_wave(params, nu - 0.5, t));
        }
    }
    let value = 0.5 * (-2.0 * kappa * nb * t).exp()
        + 0.5 * (-params.alpha_at_mean() * t).exp() * waves.value();
    Ok(Resummed {
        value,
        warnings: params.validity_warnings(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photon_states::coherent_distribution;
    use proptest::prelude::*;

    fn benson(nbar: f64, phase: f64, order: usize) -> ResumParams {
        ResumParams::new(
            nbar,
            phase,
            order,
            DampingParams::new(8.33, 0.1).unwrap(),
            36_000.0,
        )
        .unwrap()
    }

    #[test]
    fn fractional_poisson_matches_integer_pmf() {
        let p = coherent_distribution(49.0, 120).unwrap();
        let x = fractional_poisson(49.0, 49.0);
        assert!((x - p.probs()[49]).abs() < 1e-13);
        assert!((x - 0.056_894_913_306_253).abs() < 1e-12);
        assert_eq!(fractional_poisson(49.0, 0.0), (-49.0f64).exp());
        for x in [48.5, 49.5] {
            assert!((fractional_poisson(49.0, x) / p.probs()[49] - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn starts_at_one() {
        let r = resummed_p_excited(&benson(49.0, 0.0, 3), 0.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn waves_vanish_near_origin() {
        let params = benson(49.0, 0.0, 3);
        assert!(revival_wave(&params, 1.0, 1e-9).abs() < 1e-20);
    }

    #[test]
    fn envelope_peaks_at_revival_times() {
        let params = benson(49.0, 0.0, 3);
        for nu in [0.5, 1.0, 1.5] {
            let expected = 2.0 * PI * nu * 7.0;
            let (mut best, mut best_gt) = (0.0, 0.0);
            for i in 1..20_000 {
                let gt = i as f64 * 0.005;
                let e = revival_envelope(&params, nu, gt / params.g());
                if e > best {
                    best = e;
                    best_gt = gt;
                }
            }
            assert!((best_gt - expected).abs() < 0.03 * expected, "nu={nu}: {best_gt}");
        }
    }

    #[test]
    fn quarter_phase_drops_half_orders() {
        let cat = benson(49.0, PI / 2.0, 3);
        let t = 22.0 / cat.g();
        let expected = {
            let nb_decay = 0.5 * (-2.0 * 8.33 * 0.1 * t).exp();
            let mut w = initial_collapse_wave(&cat, t);
            for nu in 1..=3 {
                w += revival_wave(&cat, nu as f64, t);
            }
            nb_decay + 0.5 * (-cat.alpha_at_mean() * t).exp() * w
        };
        assert!((resummed_p_excited(&cat, t).unwrap().value - expected).abs() < 1e-15);
    }

    #[test]
    fn order_convergence() {
        let three = benson(49.0, 0.0, 3);
        let six = three.with_max_order(6).unwrap();
        for i in 0..=5000 {
            let t = i as f64 * 0.01 / three.g();
            let a = resummed_p_excited(&three, t).unwrap().value;
            let b = resummed_p_excited(&six, t).unwrap().value;
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn warnings() {
        let small = benson(4.0, 0.0, 3);
        assert_eq!(
            small.validity_warnings(),
            [ValidityWarning::SmallMeanPhotonNumber { nbar: 4.0 }]
        );
        let strong = ResumParams::new(49.0, 0.0, 3, DampingParams::new(2500.0, 0.1).unwrap(), 24_000.0).unwrap();
        assert!(matches!(
            strong.validity_warnings()[..],
            [ValidityWarning::StrongDamping { .. }]
        ));
        assert!(ResumParams::new(49.0, 0.0, 0, DampingParams::undamped(), 1.0).is_err());
        assert!(resummed_p_excited(&small, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn depends_on_phase_through_cosine(phase in -10.0f64..10.0, gt in 0.0f64..50.0) {
            let a = benson(49.0, phase, 3);
            let b = benson(49.0, -phase, 3);
            let c = benson(49.0, phase + 2.0 * PI, 3);
            let t = gt / a.g();
            let va = resummed_p_excited(&a, t).unwrap().value;
            prop_assert!((va - resummed_p_excited(&b, t).unwrap().value).abs() < 1e-12);
            prop_assert!((va - resummed_p_excited(&c, t).unwrap().value).abs() < 1e-12);
        }
    }
}
