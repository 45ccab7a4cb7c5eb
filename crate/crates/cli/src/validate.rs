//! `validate`: analytic invariants (fast) plus oracle cross-checks (full).

use std::fmt;
use std::time::Instant;

use anyhow::Result;

use crate::checks;
use crate::presets::BENSON97;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

/// Bounds used by the suite. The resummation bound was frozen from the first
/// measurement (0.0615); see the README for why it is loose.
pub const CLOSED_FORM_TOL: f64 = 1e-3;
pub const PHASE_MATCH_TOL: f64 = 0.02;
pub const PHASE_CONTRAST_MIN: f64 = 0.1;
pub const RESUM_BOUND: f64 = 0.065;
pub const RESUM_ORDER_TOL: f64 = 1e-3;
pub const UNITARITY_TOL: f64 = 1e-10;
pub const DOUBLE_SUM_TOL: f64 = 1e-8;
pub const W_RESIDUAL_FACTOR: f64 = 1e-3;
pub const FIGURE2_TOL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {} [{:.1} s]", self.name, self.detail, self.seconds)
    }
}

fn outcome(start: Instant, name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn within(value: Option<f64>, centre: f64, half: f64) -> bool {
    value.is_some_and(|v| (v - centre).abs() <= half)
}

fn fast(nb: f64) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();

    let t = Instant::now();

    let r = checks::revival_positions(nb)?;
    let ok = within(r.coherent_p_plus, 44.0, 2.2)
        && within(r.cat_p_plus, 22.0, 1.1)
        && within(r.coherent_p_plusplus, 22.0, 1.1)
        && within(r.cat_p_plusplus, 11.0, 0.6);
    out.push(outcome(t, "revival positions", ok, format!("{r:?}")));

    let t = Instant::now();

    let (quarter, even) = checks::phase_control(nb, 15.0, 30.0)?;
    out.push(outcome(
        t,
        "phase control",
        quarter < PHASE_MATCH_TOL && even > PHASE_CONTRAST_MIN,
        format!("|φ=π/2 − coherent| = {quarter:.4}, |φ=0 − coherent| = {even:.4}"),
    ));

    let t = Instant::now();

    let (resum, orders) = checks::resummation_accuracy(nb)?;
    out.push(outcome(
        t,
        "resummation",
        resum < RESUM_BOUND && orders < RESUM_ORDER_TOL,
        format!("N=3 vs exact {resum:.4} (bound {RESUM_BOUND}), N=3 vs N=6 {orders:.2e}"),
    ));

    let t = Instant::now();

    let u = checks::unitarity_defect(nb)?;
    out.push(outcome(t, "unitarity", u < UNITARITY_TOL, format!("{u:.2e}")));
    let t = Instant::now();
    let ds = checks::double_sum_gap(nb)?;
    out.push(outcome(t, "double sum", ds < DOUBLE_SUM_TOL, format!("{ds:.2e}")));

    let t = Instant::now();

    let d2 = checks::figure2_difference(nb)?;
    out.push(outcome(t, "fig2 cat vs coherent", d2 < FIGURE2_TOL, format!("{d2:.4}")));

    let t = Instant::now();

    let (lo, hi, viol) = checks::probability_bounds(nb)?;
    out.push(outcome(
        t,
        "probability bounds",
        lo >= -1e-12 && hi <= 1.0 + 1e-12 && viol <= 1e-12,
        format!("P_+ in [{lo:.4}, {hi:.4}], max(P_++ − P_+) = {viol:.1e}"),
    ));
    Ok(out)
}

fn full(nb: f64) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for nbar in [4.0, 9.0] {
        let t = Instant::now();
        let err = checks::closed_form_vs_oracle(BENSON97, nbar, 0.0, 40, 1.0, 41, 1.0)?;
        out.push(outcome(
            t,
            "closed form vs oracle",
            err < CLOSED_FORM_TOL,
            format!("n̄ = {nbar}: max |ΔF| = {err:.2e}"),
        ));
    }
    let t = Instant::now();
    let perturbed = checks::closed_form_vs_oracle(BENSON97, 4.0, 0.0, 40, 1.0, 41, 1.1)?;
    out.push(outcome(
        t,
        "sensitivity (κ +10% in oracle)",
        perturbed >= CLOSED_FORM_TOL,
        format!("max |ΔF| = {perturbed:.2e} must exceed {CLOSED_FORM_TOL}"),
    ));

    let t = Instant::now();

    let w = checks::w_residuals(4.0, nb, 24, &[0.0, 0.1, 0.25, 0.5], 24)?;
    let bound = W_RESIDUAL_FACTOR * BENSON97.kappa * w.w_norm;
    out.push(outcome(
        t,
        "W-equation residuals",
        w.max() < bound,
        format!("{:.2e} (bound {bound:.2e}, {} points)", w.max(), w.points),
    ));

    let t = Instant::now();

    let s = checks::secular_envelope(4.0, nb, &[10.0, 100.0, 1000.0], 0.5)?;
    out.push(outcome(
        t,
        "secular envelope",
        (0.8..=1.2).contains(&s.slope) && s.constant <= 10.0,
        format!("slope {:.3}, constant {:.3}, points {:?}", s.slope, s.constant, s.points),
    ));

    let t = Instant::now();

    let d = checks::decoherence_scaling([4.0, 9.0], 0.2, 1.0)?;
    out.push(outcome(
        t,
        "decoherence scaling",
        (d.exponent + 1.0).abs() <= 0.2 && (d.thermal_factor - 1.2).abs() <= 0.25 * 1.2,
        format!("exponent {:.3}, thermal factor {:.3}", d.exponent, d.thermal_factor),
    ));
    Ok(out)
}

/// Runs the suite, printing one line per check. Returns whether all passed.
pub fn run(level: Level) -> Result<bool> {
    let nb = 0.1;
    let start = Instant::now();
    let mut outcomes = fast(nb)?;
    if level == Level::Full {
        outcomes.extend(full(nb)?);
    }
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "{} checks, {failed} failed, {:.1} s",
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(failed == 0)
}
