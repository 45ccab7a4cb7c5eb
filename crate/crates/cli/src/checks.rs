//! Quantitative checks shared by `validate` and the acceptance tests. Each
//! function measures; the callers decide what is acceptable.

use anyhow::Result;
use rayon::prelude::*;

use catcavity_core::asymptotics::{resummed_p_excited, ResumParams};
use catcavity_core::dissipative::{f_star, f_star_ground, f_star_ground_double_sum, DampingParams};
use catcavity_core::jc::{build_dressed_frame, JcParams};
use catcavity_core::observables::{locate_revival, p_excited, ExperimentConfig};
use catcavity_core::oracle::{
    build_initial_state, oracle_observables, secular_populations, to_w_frame, uniform_times,
    w_equation_residuals, InitialField, Oracle, Sectors, WResidualReport,
};
use catcavity_core::photon_states::{coherent_distribution, CatSpec, PhotonDistribution};

use crate::figures::{revival_curves, CurveSettings};
use crate::presets::{Preset, BENSON97, BRUNE96, PRESETS};

/// Oracle integration tolerance for the cross-checks.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

fn settings(preset: Preset, nb: f64, nbar: f64, phi: f64, gt_max: f64, gt_step: f64) -> CurveSettings {
    CurveSettings {
        preset,
        nb,
        nbar,
        phi,
        gt_max,
        gt_step,
        si_time: false,
    }
}

fn sup_difference(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn p_plus_curve(config: &ExperimentConfig, grid: &[f64]) -> Result<Vec<f64>> {
    let g = config.jc().g();
    grid.par_iter().map(|&gt| Ok(p_excited(config, gt / g)?)).collect()
}

/// Largest `|F_n(oracle) − F*_n|` over `κt ∈ [0, kappa_t_max]` for a coherent
/// field, plus the same for `F_{−1}`. `oracle_kappa_scale` perturbs κ in the
/// oracle only.
pub fn closed_form_vs_oracle(
    preset: Preset,
    nbar: f64,
    nb: f64,
    truncation: usize,
    kappa_t_max: f64,
    samples: usize,
    oracle_kappa_scale: f64,
) -> Result<f64> {
    let jc = JcParams::resonant(preset.g)?;
    let damping = DampingParams::new(preset.kappa, nb)?;
    let oracle_damping = DampingParams::new(preset.kappa * oracle_kappa_scale, nb)?;
    let oracle = Oracle::new(&jc, &oracle_damping, truncation, Sectors::PopulationBlock)?;
    let p = coherent_distribution(nbar, truncation)?;
    let rho0 = oracle.restrict(&build_initial_state(&InitialField::Coherent(nbar), truncation)?)?;
    let times: Vec<f64> = (0..samples)
        .map(|k| k as f64 * kappa_t_max / (samples - 1) as f64 / preset.kappa)
        .collect();
    let mut worst: f64 = 0.0;
    let mut failure = None;
    oracle.sample(&rho0, &times, ORACLE_TOLERANCE, |_, rho| {
        let t = rho.time();
        let result = (|| -> Result<f64> {
            let obs = oracle_observables(rho, &jc)?;
            let fs = f_star(&p, &damping, t)?;
            let mut err = (obs.f_ground - f_star_ground(&p, &damping, t)?).abs();
            for (a, b) in obs.f.iter().zip(&fs) {
                err = err.max((a - b).abs());
            }
            Ok(err)
        })();
        match result {
            Ok(e) => worst = worst.max(e),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(worst),
    }
}

/// Located revival centres (in gt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalPositions {
    pub coherent_p_plus: Option<f64>,
    pub cat_p_plus: Option<f64>,
    pub coherent_p_plusplus: Option<f64>,
    pub cat_p_plusplus: Option<f64>,
}

/// Revival positions on the n̄ = 49 benson curves.
pub fn revival_positions(nb: f64) -> Result<RevivalPositions> {
    let s = settings(BENSON97, nb, 49.0, 0.0, 60.0, 0.01);
    let grid = s.grid();
    let coh = revival_curves(&s.coherent()?, &grid)?;
    let cat = revival_curves(&s.cat()?, &grid)?;
    let split = |c: &[(f64, f64)]| -> (Vec<f64>, Vec<f64>) { c.iter().copied().unzip() };
    let (coh_p, coh_pp) = split(&coh);
    let (cat_p, cat_pp) = split(&cat);
    // 101 samples = one gt unit, at least one carrier period near every revival
    let w = 101;
    Ok(RevivalPositions {
        coherent_p_plus: locate_revival(&grid, &coh_p, 33.0, 55.0, w),
        cat_p_plus: locate_revival(&grid, &cat_p, 15.0, 30.0, w),
        coherent_p_plusplus: locate_revival(&grid, &coh_pp, 15.0, 30.0, w),
        cat_p_plusplus: locate_revival(&grid, &cat_pp, 7.0, 16.0, w),
    })
}

/// Sup-norm differences of `P_+` from the coherent curve over
/// `gt ∈ [lo, hi]`: `(φ = π/2 cat, φ = 0 cat)`.
pub fn phase_control(nb: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let grid: Vec<f64> = (0..=((hi - lo) / 0.01).round() as usize)
        .map(|i| lo + i as f64 * 0.01)
        .collect();
    let even = settings(BENSON97, nb, 49.0, 0.0, hi, 0.01);
    let quarter = settings(BENSON97, nb, 49.0, std::f64::consts::FRAC_PI_2, hi, 0.01);
    let coh = p_plus_curve(&even.coherent()?, &grid)?;
    let p_even = p_plus_curve(&even.cat()?, &grid)?;
    let p_quarter = p_plus_curve(&quarter.cat()?, &grid)?;
    Ok((sup_difference(&p_quarter, &coh), sup_difference(&p_even, &coh)))
}

/// `(sup |resummed(N=3) − P_+|, sup |resummed(N=3) − resummed(N=6)|)` for the
/// even n̄ = 49 cat over `gt ∈ [0, 50]`.
pub fn resummation_accuracy(nb: f64) -> Result<(f64, f64)> {
    let s = settings(BENSON97, nb, 49.0, 0.0, 50.0, 0.01);
    let grid = s.grid();
    let exact = p_plus_curve(&s.cat()?, &grid)?;
    let damping = DampingParams::new(BENSON97.kappa, nb)?;
    let three = ResumParams::new(49.0, 0.0, 3, damping, BENSON97.g)?;
    let six = three.with_max_order(6)?;
    let eval = |p: &ResumParams| -> Result<Vec<f64>> {
        grid.iter()
            .map(|&gt| Ok(resummed_p_excited(p, gt / BENSON97.g)?.value))
            .collect()
    };
    let r3 = eval(&three)?;
    let r6 = eval(&six)?;
    Ok((sup_difference(&r3, &exact), sup_difference(&r3, &r6)))
}

/// Largest unitarity defect `|½F*_{−1} + ΣF*_n − Σp_n|` at 100 times on every
/// preset (coherent and even cat fields, κt ∈ [0, 2]).
pub fn unitarity_defect(nb: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for preset in PRESETS {
        let s = settings(preset, nb, preset.nbar, 0.0, 0.0, 1.0);
        for config in [s.coherent()?, s.cat()?] {
            let p = config.distribution();
            let d = config.damping();
            for k in 0..100 {
                let t = k as f64 * 0.02 / preset.kappa;
                let f = f_star(p, d, t)?;
                let total = 0.5 * f_star_ground(p, d, t)? + f.iter().sum::<f64>();
                worst = worst.max((total - p.mass()).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest gap between the unitarity-based `F*_{−1}` and its explicit double
/// sum, over several distributions with `N ≤ 20`.
pub fn double_sum_gap(nb: f64) -> Result<f64> {
    let mut dists = vec![
        coherent_distribution(3.3, 20)?,
        catcavity_core::photon_states::cat_distribution(&CatSpec::even(3.3)?, 20)?,
        coherent_distribution(1.0, 16)?,
    ];
    let n = 6;
    dists.push(PhotonDistribution::from_probs(vec![1.0 / (n + 1) as f64; n + 1])?);
    let d = DampingParams::new(1.0, nb)?;
    let mut worst: f64 = 0.0;
    for p in &dists {
        for k in 0..50 {
            let t = k as f64 * 0.04;
            worst = worst.max((f_star_ground(p, &d, t)? - f_star_ground_double_sum(p, &d, t)?).abs());
        }
    }
    Ok(worst)
}

/// W-equation residuals on windows of a benson trajectory.
pub fn w_residuals(nbar: f64, nb: f64, truncation: usize, windows: &[f64], samples: usize) -> Result<WResidualReport> {
    let p = BENSON97;
    let jc = JcParams::resonant(p.g)?;
    let damping = DampingParams::new(p.kappa, nb)?;
    let frame = build_dressed_frame(jc, truncation)?;
    let oracle = Oracle::new(&jc, &damping, truncation, Sectors::PopulationBlock)?;
    let rho0 = oracle.restrict(&build_initial_state(&InitialField::Coherent(nbar), truncation)?)?;
    let dt = 0.02 / p.g;
    let mut times = Vec::new();
    for &kt in windows {
        times.extend(uniform_times(kt / p.kappa, dt, samples));
    }
    let mut frames = Vec::with_capacity(times.len());
    oracle.sample(&rho0, &times, 1e-11, |_, rho| frames.push(rho.clone()))?;
    let mut report = WResidualReport::default();
    for chunk in frames.chunks(samples) {
        let traj = chunk
            .iter()
            .map(|rho| to_w_frame(rho, &frame, rho.time()))
            .collect::<Result<Vec<_>, _>>()?;
        let r = w_equation_residuals(&traj, &frame, &damping, dt)?;
        report.diagonal = report.diagonal.max(r.diagonal);
        report.coherence = report.coherence.max(r.coherence);
        report.ground = report.ground.max(r.ground);
        report.w_norm = report.w_norm.max(r.w_norm);
        report.points += r.points;
    }
    Ok(report)
}

/// Error of the secular rate equations against the oracle, as a function of
/// κ/g.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularEnvelope {
    /// `(κ/g, max_n |F_n(oracle) − F_n(secular)|)`.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of `ln err` against `ln(κ/g)`.
    pub slope: f64,
    /// `max err/(κ/g)`.
    pub constant: f64,
}

pub fn secular_envelope(nbar: f64, nb: f64, ratios: &[f64], kappa_t_max: f64) -> Result<SecularEnvelope> {
    let kappa = 1.0;
    let truncation = 24;
    let points = ratios
        .par_iter()
        .map(|&g_over_kappa| -> Result<(f64, f64)> {
            let jc = JcParams::resonant(g_over_kappa * kappa)?;
            let damping = DampingParams::new(kappa, nb)?;
            let oracle = Oracle::new(&jc, &damping, truncation, Sectors::PopulationBlock)?;
            let p = coherent_distribution(nbar, truncation)?;
            let rho0 = oracle.restrict(&build_initial_state(&InitialField::Coherent(nbar), truncation)?)?;
            let times: Vec<f64> = (1..=50).map(|k| k as f64 * kappa_t_max / 50.0 / kappa).collect();
            let secular = secular_populations(&p.probs()[..truncation], 0.0, &damping, &times, 1e-12)?;
            let mut worst: f64 = 0.0;
            let mut idx = 0;
            oracle.sample(&rho0, &times, ORACLE_TOLERANCE, |_, rho| {
                let (f, f_ground) = rho.dressed_sums();
                let (sf, sg) = &secular[idx];
                idx += 1;
                worst = worst.max((f_ground - sg).abs());
                for (a, b) in f.iter().zip(sf) {
                    worst = worst.max((a - b).abs());
                }
            })?;
            Ok((1.0 / g_over_kappa, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let constant = points.iter().map(|(r, e)| e / r).fold(0.0, f64::max);
    Ok(SecularEnvelope { points, slope, constant })
}

/// 1/e decay time of the normalised field parity of an even cat in a cavity
/// with the atom decoupled.
pub fn parity_decay_time(nbar: f64, nb: f64, kappa: f64) -> Result<f64> {
    let truncation = (nbar + 10.0 * (nbar + 1.0).sqrt() + 10.0).ceil() as usize;
    let damping = DampingParams::new(kappa, nb)?;
    let oracle = Oracle::new(&JcParams::uncoupled(), &damping, truncation, Sectors::PopulationBlock)?;
    let rho0 = oracle.restrict(&build_initial_state(&InitialField::Cat(CatSpec::even(nbar)?), truncation)?)?;
    let parity0 = rho0.field_parity();
    // the predicted scale is t_cav/n̄; sample well past it
    let horizon = 4.0 * 0.5 / kappa / nbar;
    let times = uniform_times(0.0, horizon / 2000.0, 2001);
    let mut values = Vec::with_capacity(times.len());
    oracle.sample(&rho0, &times, 1e-10, |_, rho| values.push(rho.field_parity() / parity0))?;
    let target = (-1.0f64).exp();
    for i in 1..values.len() {
        if values[i] <= target {
            let (t0, t1) = (times[i - 1], times[i]);
            let (v0, v1) = (values[i - 1], values[i]);
            return Ok(t0 + (t1 - t0) * (v0 - target) / (v0 - v1));
        }
    }
    anyhow::bail!("parity did not fall to 1/e within the sampled horizon")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceScaling {
    /// `(n̄, n_b, t_d)` in seconds.
    pub times: Vec<(f64, f64, f64)>,
    /// Fitted exponent of `t_d ∝ n̄^p`, averaged over `n_b`.
    pub exponent: f64,
    /// `t_d(n_b = 0)/t_d(n_b)`, averaged over n̄.
    pub thermal_factor: f64,
    pub nb: f64,
}

pub fn decoherence_scaling(nbars: [f64; 2], nb: f64, kappa: f64) -> Result<DecoherenceScaling> {
    let cases: Vec<(f64, f64)> = nbars.iter().flat_map(|&n| [(n, 0.0), (n, nb)]).collect();
    let times = cases
        .par_iter()
        .map(|&(n, b)| Ok((n, b, parity_decay_time(n, b, kappa)?)))
        .collect::<Result<Vec<_>>>()?;
    let td = |n: f64, b: f64| times.iter().find(|x| x.0 == n && x.1 == b).map(|x| x.2).unwrap_or(f64::NAN);
    let ln_ratio = (nbars[1] / nbars[0]).ln();
    let exponent = [0.0, nb]
        .iter()
        .map(|&b| (td(nbars[1], b) / td(nbars[0], b)).ln() / ln_ratio)
        .sum::<f64>()
        / 2.0;
    let thermal_factor = nbars.iter().map(|&n| td(n, 0.0) / td(n, nb)).sum::<f64>() / 2.0;
    Ok(DecoherenceScaling {
        times,
        exponent,
        thermal_factor,
        nb,
    })
}

/// Sup-norm difference of the cat and coherent `P_+` on the brune figure grid.
pub fn figure2_difference(nb: f64) -> Result<f64> {
    let s = settings(BRUNE96, nb, BRUNE96.nbar, 0.0, BRUNE96.gt_max, BRUNE96.gt_step);
    let grid = s.grid();
    Ok(sup_difference(&p_plus_curve(&s.cat()?, &grid)?, &p_plus_curve(&s.coherent()?, &grid)?))
}

/// Range of `P_+` and the largest violation of `P_{++} ≤ P_+` on every preset.
pub fn probability_bounds(nb: f64) -> Result<(f64, f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut violation: f64 = 0.0;
    for preset in PRESETS {
        let s = settings(preset, nb, preset.nbar, 0.0, preset.gt_max, 0.05);
        let grid = s.grid();
        for config in [s.coherent()?, s.cat()?] {
            for (p, pp) in revival_curves(&config, &grid)? {
                lo = lo.min(p);
                hi = hi.max(p);
                violation = violation.max(pp - p);
            }
        }
    }
    Ok((lo, hi, violation))
}
