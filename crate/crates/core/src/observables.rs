//! Atom-detection probabilities built on the closed-form damped populations.
//!
//! Atoms enter the cavity one at a time in the excited state, interact for a
//! passage time and are measured on exit. `P_±(t)` is the single-atom outcome
//! probability; `P_{s₁s₂}` is the *joint* probability that the first atom is
//! found in `s₁` after `t_A` and the next one in `s₂` after a further
//! `t_B − t_A`.

use alloc::vec::Vec;

// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::dissipative::{
    coherence_decay, ground_from_unitarity, relax_populations, DampingParams,
};
use crate::jc::JcParams;
use crate::numeric::{stable_sum, CompensatedSum};
use crate::photon_states::{cat_distribution, cat_mean_photons, CatSpec, PhotonDistribution};
use crate::{Error, Result, ValidityWarning};

/// κ/g above which the secular approximation is flagged.
pub const SECULAR_KAPPA_OVER_G: f64 = 0.1;

/// `P_±` below this makes the conditional in η undefined.
pub const ETA_EPSILON: f64 = 1e-6;

/// Negative conditioned populations beyond this are reported as errors.
const CONDITIONED_TOLERANCE: f64 = 1e-10;

/// Atomic measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Excited,
    Ground,
}

impl Outcome {
    pub fn label(self) -> char {
        match self {
            Outcome::Excited => '+',
            Outcome::Ground => '-',
        }
    }
}

/// Initial cavity field.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldPreparation {
    Cat(CatSpec),
    Distribution(PhotonDistribution),
}

/// Parameters of one two-atom experiment on the analytic path.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    jc: JcParams,
    damping: DampingParams,
    field: FieldPreparation,
    distribution: PhotonDistribution,
}

impl ExperimentConfig {
    /// Resonance is required; κ/g ≥ 0.1 is accepted but reported by
    /// [`ExperimentConfig::validity_warnings`].
    pub fn new(
        jc: JcParams,
        damping: DampingParams,
        field: FieldPreparation,
        truncation: usize,
    ) -> Result<Self> {
        jc.require_resonance()?;
        let distribution = match &field {
            FieldPreparation::Cat(spec) => cat_distribution(spec, truncation)?,
            FieldPreparation::Distribution(p) => {
                if p.truncation() != truncation {
                    return Err(Error::invalid(
                        "truncation",
                        "does not match the supplied distribution",
                    ));
                }
                p.clone()
            }
        };
        Ok(Self {
            jc,
            damping,
            field,
            distribution,
        })
    }

    pub fn jc(&self) -> &JcParams {
        &self.jc
    }

    pub fn damping(&self) -> &DampingParams {
        &self.damping
    }

    pub fn field(&self) -> &FieldPreparation {
        &self.field
    }

    pub fn distribution(&self) -> &PhotonDistribution {
        &self.distribution
    }

    pub fn truncation(&self) -> usize {
        self.distribution.truncation()
    }

    /// Mean photon number of the initial field.
    pub fn mean_photons(&self) -> f64 {
        match &self.field {
            FieldPreparation::Cat(spec) => {
                cat_mean_photons(spec).unwrap_or_else(|_| self.distribution.mean())
            }
            FieldPreparation::Distribution(p) => p.mean(),
        }
    }

    pub fn validity_warnings(&self) -> Vec<ValidityWarning> {
        let mut out = Vec::new();
        let ratio = self.damping.kappa() / self.jc.g();
        if ratio >= SECULAR_KAPPA_OVER_G {
            out.push(ValidityWarning::WeakCoupling {
                kappa_over_g: ratio,
            });
        }
        out.extend(self.damping.validity_warning());
        out
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// `Σ_n ½ e^{−α_n t} cos(2gt√(n+1)) w_n` for the given coherence weights.
fn oscillating_part(coherences: &[f64], g: f64, t: f64) -> Vec<f64> {
    coherences
        .iter()
        .enumerate()
        .map(|(n, &c)| c * (2.0 * g * t * ((n + 1) as f64).sqrt()).cos())
        .collect()
}

/// Probability that an excited atom entering a field with (possibly
/// unnormalised) photon weights `w` exits excited after `t`:
/// `Σ_n ½[F*_n(t) + e^{−α_n t} cos(2gt√(n+1)) w_n]`.
pub fn excited_weight(weights: &[f64], g: f64, damping: &DampingParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let relaxed = relax_populations(weights, damping, t)?;
    let coherences = coherence_decay(weights, damping, t)?;
    let mut acc = CompensatedSum::new();
    for f in relaxed {
        acc.add(0.5 * f);
    }
    for x in oscillating_part(&coherences, g, t) {
        acc.add(x);
    }
    Ok(acc.value())
}

/// `P_+(t) = ½ − ¼F*_{−1}(t) + Σ_n ½ e^{−α_n t} cos(2gt√(n+1)) p_n`.
pub fn p_excited(config: &ExperimentConfig, t: f64) -> Result<f64> {
    check_time(t)?;
    let p = config.distribution.probs();
    let relaxed = relax_populations(p, &config.damping, t)?;
    let ground = ground_from_unitarity(p, &relaxed)?;
    let coherences = coherence_decay(p, &config.damping, t)?;
    let mut acc = CompensatedSum::new();
    acc.add(0.5);
    acc.add(-0.25 * ground);
    for x in oscillating_part(&coherences, config.jc.g(), t) {
        acc.add(x);
    }
    Ok(acc.value())
}

/// Unnormalised field populations after the first atom is found in a given
/// state.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedField {
    dist: Vec<f64>,
    weight: f64,
    outcome: Outcome,
}

impl ConditionedField {
    pub fn dist(&self) -> &[f64] {
        &self.dist
    }

    /// `Σ_n dist[n] = P_{outcome}(t_A)`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }
}

/// Conditioned photon populations.
///
/// * excited: `p_n(t_A) = ½[F*_n + e^{−α_n t_A} cos(2gt_A√(n+1)) p_n]`, `n = 0..=N`
/// * ground: `p⁻_0 = ½F*_{−1}` and
///   `p⁻_n = ½[F*_{n−1} − e^{−α_{n−1} t_A} cos(2gt_A√n) p_{n−1}]`, `n = 1..=N+1`
///   (`|n,−⟩` is the lower component of doublet `n−1`, so the ground outcome
///   carries one more Fock level).
pub fn conditioned_field(
    config: &ExperimentConfig,
    t_a: f64,
    outcome: Outcome,
) -> Result<ConditionedField> {
    check_time(t_a)?;
    let p = config.distribution.probs();
    let damping = &config.damping;
    let relaxed = relax_populations(p, damping, t_a)?;
    let osc = oscillating_part(&coherence_decay(p, damping, t_a)?, config.jc.g(), t_a);
    let mut dist = match outcome {
        Outcome::Excited => relaxed
            .iter()
            .zip(&osc)
            .map(|(f, o)| 0.5 * f + o)
            .collect::<Vec<_>>(),
        Outcome::Ground => {
            let ground = ground_from_unitarity(p, &relaxed)?;
            let mut d = Vec::with_capacity(p.len() + 1);
            d.push(0.5 * ground);
            d.extend(relaxed.iter().zip(&osc).map(|(f, o)| 0.5 * f - o));
            d
        }
    };
    for x in dist.iter_mut() {
        if *x < -CONDITIONED_TOLERANCE {
            return Err(Error::Inconsistent {
                what: "conditioned photon population",
                value: *x,
            });
        }
        *x = x.max(0.0);
    }
    let weight = stable_sum(&dist);
    Ok(ConditionedField {
        dist,
        weight,
        outcome,
    })
}

/// Joint probability `P_{s₁s₂}` of the first atom in `s₁` at `t_A` and the next
/// (injected excited) atom in `s₂` after a further `t_B − t_A`.
pub fn p_joint(
    config: &ExperimentConfig,
    t_a: f64,
    t_b: f64,
    s1: Outcome,
    s2: Outcome,
) -> Result<f64> {
    check_time(t_a)?;
    if !(t_b >= t_a) {
        return Err(Error::invalid("t_b", "must satisfy t_b >= t_a"));
    }
    let first = conditioned_field(config, t_a, s1)?;
    let excited = excited_weight(first.dist(), config.jc.g(), &config.damping, t_b - t_a)?;
    Ok(match s2 {
        Outcome::Excited => excited,
        Outcome::Ground => first.weight() - excited,
    })
}

/// `η(t) = P_{++}/P_+ − P_{−+}/P_−` with `t_A = t`, `t_B = 2t`; `None` where
/// `P_+` or `P_−` falls below [`ETA_EPSILON`].
pub fn eta_correlation(config: &ExperimentConfig, t: f64) -> Result<Option<f64>> {
    Ok(eta_from_parts(&correlation_parts(config, t)?))
}

/// The four probabilities behind η at passage time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationParts {
    pub p_plus: f64,
    pub p_minus: f64,
    pub p_plus_plus: f64,
    pub p_minus_plus: f64,
}

pub fn correlation_parts(config: &ExperimentConfig, t: f64) -> Result<CorrelationParts> {
    check_time(t)?;
    let g = config.jc.g();
    let plus = conditioned_field(config, t, Outcome::Excited)?;
    let minus = conditioned_field(config, t, Outcome::Ground)?;
    Ok(CorrelationParts {
        p_plus: plus.weight(),
        p_minus: minus.weight(),
        p_plus_plus: excited_weight(plus.dist(), g, &config.damping, t)?,
        p_minus_plus: excited_weight(minus.dist(), g, &config.damping, t)?,
    })
}

pub fn eta_from_parts(parts: &CorrelationParts) -> Option<f64> {
    if parts.p_plus < ETA_EPSILON || parts.p_minus < ETA_EPSILON {
        return None;
    }
    Some(parts.p_plus_plus / parts.p_plus - parts.p_minus_plus / parts.p_minus)
}

/// `t_d = t_cav / (n̄ (1 + n_b))`.
pub fn decoherence_time(config: &ExperimentConfig) -> Result<f64> {
    decoherence_time_for(config.mean_photons(), config.damping())
}

pub fn decoherence_time_for(nbar: f64, damping: &DampingParams) -> Result<f64> {
    if !(nbar > 0.0) {
        return Err(Error::invalid("nbar", "decoherence time needs nbar > 0"));
    }
    Ok(damping.cavity_time() / (nbar * (1.0 + damping.n_thermal())))
}

/// Locates the centre of a revival on a uniformly sampled curve.
///
/// The slowly varying background is removed with a centred moving average of
/// `width` samples; the envelope is the moving average of the absolute
/// residual over the same width, which should span at least one carrier
/// period. Returns the abscissa of the envelope maximum inside `[lo, hi]`.
pub fn locate_revival(xs: &[f64], ys: &[f64], lo: f64, hi: f64, width: usize) -> Option<f64> {
    if xs.len() != ys.len() || xs.is_empty() || width == 0 {
        return None;
    }
    let half = width / 2;
    let len = ys.len();
    let window = |i: usize| (i.saturating_sub(half), (i + half + 1).min(len));
    let moving_mean = |values: &[f64]| -> Vec<f64> {
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(0.0);
        for &v in values {
            prefix.push(prefix.last().copied().unwrap_or(0.0) + v);
        }
        (0..len)
            .map(|i| {
                let (a, b) = window(i);
                (prefix[b] - prefix[a]) / (b - a) as f64
            })
            .collect()
    };
    let baseline = moving_mean(ys);
    let residual: Vec<f64> = ys.iter().zip(&baseline).map(|(y, b)| (y - b).abs()).collect();
    let envelope = moving_mean(&residual);
    let mut best: Option<(f64, f64)> = None;
    for i in 0..len {
        if xs[i] < lo || xs[i] > hi {
            continue;
        }
        if best.is_none_or(|(_, e)| envelope[i] > e) {
            best = Some((xs[i], envelope[i]));
        }
    }
    best.map(|(x, _)| x)
}
