//! Brute-force reference: the full atom⊗field master equation in a truncated
//! Fock basis, integrated in the interaction picture.

mod density;
mod integrator;
mod liouvillian;
mod residuals;
mod secular;
mod wframe;

use alloc::vec::Vec;

use num_complex::Complex64;

pub use density::{bare_index, bare_state, build_initial_state, excitation, Atom, DensityMatrix, InitialField};
pub use integrator::{Dopri5, OdeScalar, StepStats};
pub use liouvillian::{integrate, Oracle, Sectors, DEFAULT_TOLERANCE};
pub use residuals::{
    secular_diagonal, uniform_times, w_equation_residuals, WEquations, WResidualReport, TRUNCATION_MARGIN,
};
pub use secular::secular_populations;
pub use wframe::{dressed_index, to_w_frame, WFrameMatrix};

use crate::jc::{build_dressed_frame, JcParams};
use crate::Result;

/// The quantities the analytic path predicts, read off one oracle state.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleObservables {
    pub time: f64,
    pub p_excited: f64,
    /// Unnormalised photon populations with the atom found excited.
    pub field_excited: Vec<f64>,
    /// Unnormalised photon populations with the atom found in the ground state.
    pub field_ground: Vec<f64>,
    /// Dressed populations `F_n`, `n = 0..N−1`.
    pub f: Vec<f64>,
    /// `F_{−1}`.
    pub f_ground: f64,
    /// `W^{+−}_n`, whose analytic counterpart is `½e^{−α_n t} p_n`.
    pub offdiag: Vec<Complex64>,
}

/// Extracts [`OracleObservables`] from an interaction-picture state.
pub fn oracle_observables(rho: &DensityMatrix, jc: &JcParams) -> Result<OracleObservables> {
    let frame = build_dressed_frame(*jc, rho.truncation())?;
    let w = to_w_frame(rho, &frame, rho.time())?;
    let (f, f_ground) = rho.dressed_sums();
    Ok(OracleObservables {
        time: rho.time(),
        p_excited: rho.p_excited(),
        field_excited: rho.conditioned_populations(Atom::Excited),
        field_ground: rho.conditioned_populations(Atom::Ground),
        offdiag: (0..rho.truncation()).map(|n| w.coherence(n)).collect(),
        f,
        f_ground,
    })
}

/// Joint probabilities `P_{s,+}` and `P_{s,−}` for two atoms: the first is
/// measured in `first` at `t_a`, the field is kept unnormalised, a fresh
/// excited atom enters and is measured after a further `t_b − t_a`.
///
/// Both legs start at the interaction-picture origin; `rho0` must be at
/// time zero.
pub fn oracle_joint(
    oracle: &Oracle,
    rho0: &DensityMatrix,
    t_a: f64,
    t_b: f64,
    first: Atom,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(t_b >= t_a) {
        return Err(crate::Error::invalid("t_b", "must satisfy t_b >= t_a"));
    }
    let after_first = oracle.evolve(rho0, t_a, tol)?;
    let field = after_first.field_block(first);
    let weight: f64 = after_first.conditioned_populations(first).iter().sum();
    let second = oracle.restrict(&DensityMatrix::excited_with_field(&field, rho0.truncation())?)?;
    let end = oracle.evolve(&second, t_b - t_a, tol)?;
    let plus = end.p_excited();
    Ok((plus, weight - plus))
}
