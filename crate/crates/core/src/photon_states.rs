//! Photon-number statistics of coherent and Schrödinger-cat field states.
//!
//! The cat state is `(|z⟩ + e^{iφ}|−z⟩)` normalised by
//! `(2 + 2 cos φ e^{−2|z|²})^{−1/2}`. Every quantity used downstream depends on
//! `z` only through the intensity `|z|²`, so the complex phase of `z` is not
//! stored: the amplitudes produced here take `z` real and positive.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::numeric::{ln_gamma, stable_sum};
use crate::{Error, Result};

/// Smallest retained mass accepted after truncating a distribution.
pub const MASS_TOLERANCE: f64 = 1e-10;

/// Below this the cat normalisation `2 + 2 cos φ e^{−2|z|²}` is treated as zero.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Cat-state parameters: intensity `|z|²` and relative phase φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSpec {
    intensity: f64,
    phase: f64,
}

impl CatSpec {
    /// The phase is reduced to `[0, 2π)`.
    pub fn new(intensity: f64, phase: f64) -> Result<Self> {
        if !(intensity >= 0.0) || !intensity.is_finite() {
            return Err(Error::invalid("intensity", "must be finite and >= 0"));
        }
        if !phase.is_finite() {
            return Err(Error::invalid("phase", "must be finite"));
        }
        Ok(Self {
            intensity,
            phase: reduce_phase(phase),
        })
    }

    /// Even cat, φ = 0.
    pub fn even(intensity: f64) -> Result<Self> {
        Self::new(intensity, 0.0)
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `2 + 2 cos φ e^{−2|z|²}`, the squared norm of the unnormalised
    /// superposition.
    pub fn norm_squared(&self) -> f64 {
        2.0 + 2.0 * self.phase.cos() * branch_overlap(self.intensity)
    }

    fn check_nondegenerate(&self) -> Result<f64> {
        let norm = self.norm_squared();
        if norm <= DEGENERATE_NORM {
            return Err(Error::DegenerateState {
                intensity: self.intensity,
                phase: self.phase,
            });
        }
        Ok(norm)
    }
}

fn reduce_phase(phase: f64) -> f64 {
    let r = num_traits::Euclid::rem_euclid(&phase, &TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A truncated photon-number distribution `p_n`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    probs: Vec<f64>,
}

impl PhotonDistribution {
    /// Wraps raw probabilities. Entries must lie in `[0, 1]` and the total mass in
    /// `[1 − 10⁻¹⁰, 1 + 10⁻¹²]`.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::invalid("truncation", "must be >= 1"));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("probs", "entries must lie in [0, 1]"));
        }
        let mass = stable_sum(&probs);
        if !(1.0 - MASS_TOLERANCE..=1.0 + 1e-12).contains(&mass) {
            return Err(Error::TruncationLoss {
                truncation: probs.len() - 1,
                retained: mass,
            });
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Largest retained photon number N.
    pub fn truncation(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mass(&self) -> f64 {
        stable_sum(&self.probs)
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .collect::<crate::numeric::CompensatedSum>()
            .value()
    }
}

/// `N = max(32, ⌈n̄ + 10√(n̄+1)⌉)`, enough to keep the Poisson tail below 10⁻¹⁰
/// for the parameter sets used here.
pub fn default_truncation(nbar: f64) -> usize {
    let n = (nbar + 10.0 * (nbar + 1.0).sqrt()).ceil();
    (n as usize).max(32)
}

/// `ln` of the Poisson weight `I^n e^{−I} / n!`, with `ln 0 = −∞` for the
/// vacuum limit.
fn ln_poisson(intensity: f64, n: usize) -> f64 {
    if intensity == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    n as f64 * intensity.ln() - intensity - ln_gamma(n as f64 + 1.0)
}

fn finish(probs: Vec<f64>) -> Result<PhotonDistribution> {
    let mass = stable_sum(&probs);
    if mass < 1.0 - MASS_TOLERANCE {
        return Err(Error::TruncationLoss {
            truncation: probs.len() - 1,
            retained: mass,
        });
    }
    Ok(PhotonDistribution { probs })
}

fn check_truncation(truncation: usize) -> Result<()> {
    if truncation < 1 {
        return Err(Error::invalid("truncation", "must be >= 1"));
    }
    Ok(())
}

/// Poisson distribution with mean `intensity`, evaluated in log space.
pub fn coherent_distribution(intensity: f64, truncation: usize) -> Result<PhotonDistribution> {
    check_truncation(truncation)?;
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::invalid("intensity", "must be finite and >= 0"));
    }
    let probs = (0..=truncation)
        .map(|n| ln_poisson(intensity, n).exp())
        .collect();
    finish(probs)
}

/// Photon-number distribution of the cat state
/// `p_n = Poisson(|z|²)_n · 2(1 + cos φ (−1)ⁿ) / (2 + 2 cos φ e^{−2|z|²})`.
pub fn cat_distribution(spec: &CatSpec, truncation: usize) -> Result<PhotonDistribution> {
    check_truncation(truncation)?;
    let norm = spec.check_nondegenerate()?;
    let cos_phase = spec.phase.cos();
    let probs = (0..=truncation)
        .map(|n| {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            let interference = 2.0 * (1.0 + cos_phase * parity);
            if interference <= 0.0 {
                return 0.0;
            }
            (ln_poisson(spec.intensity, n) + (interference / norm).ln()).exp()
        })
        .collect();
    finish(probs)
}

/// Mean photon number `|z|² (1 − cos φ e^{−2|z|²}) / (1 + cos φ e^{−2|z|²})`;
/// for the even cat this is `|z|² tanh |z|²`.
pub fn cat_mean_photons(spec: &CatSpec) -> Result<f64> {
    spec.check_nondegenerate()?;
    let c = spec.phase.cos() * branch_overlap(spec.intensity);
    Ok(spec.intensity * (1.0 - c) / (1.0 + c))
}

/// `|⟨z|−z⟩|² = e^{−2|z|²}`.
pub fn branch_overlap(intensity: f64) -> f64 {
    (-2.0 * intensity).exp()
}

/// Fock amplitudes `⟨n|z;φ⟩` of the normalised cat state (z real, positive).
pub fn cat_amplitudes(spec: &CatSpec, truncation: usize) -> Result<Vec<Complex64>> {
    check_truncation(truncation)?;
    let norm = spec.check_nondegenerate()?.sqrt();
    let rotation = Complex64::from_polar(1.0, spec.phase);
    Ok((0..=truncation)
        .map(|n| {
            let magnitude = (0.5 * ln_poisson(spec.intensity, n)).exp();
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            (Complex64::new(1.0, 0.0) + rotation * parity) * (magnitude / norm)
        })
        .collect())
}

/// Fock amplitudes of the coherent state `|z⟩`, z real and positive.
pub fn coherent_amplitudes(intensity: f64, truncation: usize) -> Result<Vec<Complex64>> {
    check_truncation(truncation)?;
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::invalid("intensity", "must be finite and >= 0"));
    }
    Ok((0..=truncation)
        .map(|n| Complex64::new((0.5 * ln_poisson(intensity, n)).exp(), 0.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};
    use proptest::prelude::*;

    #[test]
    fn vacuum_is_a_point_mass() {
        let p = coherent_distribution(0.0, 8).unwrap();
        assert_eq!(p.probs()[0], 1.0);
        assert!(p.probs()[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn poisson_peak_value_for_intensity_49() {
        let p = coherent_distribution(49.0, 120).unwrap();
        // exact log-space Poisson pmf at n = 49
        assert!((p.probs()[49] - 0.056_894_913_306_253).abs() < 1e-12);
        assert!((p.mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn truncation_loss_is_reported() {
        let err = coherent_distribution(49.0, 40).unwrap_err();
        assert!(matches!(err, Error::TruncationLoss { truncation: 40, .. }));
        assert!(coherent_distribution(1.0, 0).is_err());
    }

    #[test]
    fn even_cat_has_no_odd_components() {
        let spec = CatSpec::even(49.0).unwrap();
        let p = cat_distribution(&spec, 120).unwrap();
        for (n, &x) in p.probs().iter().enumerate() {
            if n % 2 == 1 {
                assert_eq!(x, 0.0);
            }
        }
        assert!((p.mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn odd_cat_at_zero_intensity_is_degenerate() {
        let spec = CatSpec::new(0.0, PI).unwrap();
        assert!(matches!(
            cat_distribution(&spec, 8),
            Err(Error::DegenerateState { .. })
        ));
        assert!(cat_mean_photons(&spec).is_err());
        assert!(cat_amplitudes(&spec, 8).is_err());
    }

    #[test]
    fn quarter_phase_cat_matches_coherent_state() {
        let spec = CatSpec::new(49.0, FRAC_PI_2).unwrap();
        let cat = cat_distribution(&spec, 120).unwrap();
        let coh = coherent_distribution(49.0, 120).unwrap();
        for (a, b) in cat.probs().iter().zip(coh.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cat_mean_photon_numbers() {
        let m = cat_mean_photons(&CatSpec::even(49.0).unwrap()).unwrap();
        assert!((m - 49.0 * 49.0_f64.tanh()).abs() < 1e-12);
        assert!((m - 49.0).abs() < 1e-9);
        let m = cat_mean_photons(&CatSpec::even(3.3).unwrap()).unwrap();
        assert!((m - 3.3 * 3.3_f64.tanh()).abs() < 1e-12);
        assert!((m - 3.291_04).abs() < 1e-5);
        let m = cat_mean_photons(&CatSpec::new(49.0, FRAC_PI_2).unwrap()).unwrap();
        assert!((m - 49.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_values() {
        let o = branch_overlap(49.0);
        assert!((o / 2.75e-43 - 1.0).abs() < 0.01);
        assert_eq!(branch_overlap(0.0), 1.0);
        assert!((branch_overlap(1.0) - 0.135_335_283_236_612_7).abs() < 1e-15);
    }

    #[test]
    fn amplitudes_square_to_distribution() {
        let spec = CatSpec::new(4.0, 0.7).unwrap();
        let amps = cat_amplitudes(&spec, 40).unwrap();
        let p = cat_distribution(&spec, 40).unwrap();
        for (a, q) in amps.iter().zip(p.probs()) {
            assert!((a.norm_sqr() - q).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_is_reduced() {
        let spec = CatSpec::new(1.0, -FRAC_PI_2).unwrap();
        assert!((spec.phase() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert!(CatSpec::new(-1.0, 0.0).is_err());
        assert!(CatSpec::new(1.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn cat_distribution_is_a_probability_vector(
            intensity in 0.01f64..60.0,
            phase in 0.0f64..TAU,
        ) {
            let spec = CatSpec::new(intensity, phase).unwrap();
            prop_assume!(spec.norm_squared() > 1e-6);
            let n = default_truncation(intensity);
            let p = cat_distribution(&spec, n).unwrap();
            prop_assert!(p.probs().iter().all(|&x| (0.0..=1.0).contains(&x)));
            let mass = p.mass();
            prop_assert!((1.0 - MASS_TOLERANCE..=1.0 + 1e-12).contains(&mass));
        }

        #[test]
        fn cat_mean_matches_distribution_mean(
            intensity in 0.05f64..60.0,
            phase in 0.0f64..TAU,
        ) {
            let spec = CatSpec::new(intensity, phase).unwrap();
            prop_assume!(spec.norm_squared() > 1e-6);
            let n = (intensity + 10.0 * intensity.sqrt() + 20.0).ceil() as usize;
            let p = cat_distribution(&spec, n).unwrap();
            let mean = cat_mean_photons(&spec).unwrap();
            prop_assert!((p.mean() - mean).abs() < 1e-8, "{} vs {}", p.mean(), mean);
        }

        #[test]
        fn full_turn_leaves_cat_unchanged(intensity in 0.01f64..60.0, phase in 0.0f64..TAU) {
            let a = CatSpec::new(intensity, phase).unwrap();
            let b = CatSpec::new(intensity, phase + TAU).unwrap();
            prop_assume!(a.norm_squared() > 1e-6);
            let n = default_truncation(intensity);
            let pa = cat_distribution(&a, n).unwrap();
            let pb = cat_distribution(&b, n).unwrap();
            for (x, y) in pa.probs().iter().zip(pb.probs()) {
                prop_assert!((x - y).abs() <= 1e-12 * x.max(*y));
            }
        }

        #[test]
        fn quarter_phase_cat_within_overlap_of_coherent(intensity in 0.01f64..60.0) {
            let spec = CatSpec::new(intensity, FRAC_PI_2).unwrap();
            let n = default_truncation(intensity);
            let cat = cat_distribution(&spec, n).unwrap();
            let coh = coherent_distribution(intensity, n).unwrap();
            let bound = branch_overlap(intensity) + 1e-15;
            for (x, y) in cat.probs().iter().zip(coh.probs()) {
                prop_assert!((x - y).abs() <= bound);
            }
        }
    }
}
