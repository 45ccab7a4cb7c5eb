use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("truncation N = {truncation} retains only {retained} of the photon-number mass")]
    TruncationLoss { truncation: usize, retained: f64 },

    #[error("cat state with intensity {intensity} and phase {phase} has vanishing norm")]
    DegenerateState { intensity: f64, phase: f64 },

    #[error("negative time {0} s")]
    NegativeTime(f64),

    #[error("operation requires resonance, detuning is {0} s^-1")]
    OffResonance(f64),

    #[error("internal consistency check failed: {what} = {value:e}")]
    Inconsistent { what: &'static str, value: f64 },

    #[error(
        "step size underflow at t = {t:e} s (h = {step:e} s); loosen the tolerance or \
         reduce the truncation"
    )]
    StepSizeUnderflow { t: f64, step: f64 },

    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),
}

impl Error {
    pub(crate) const fn invalid(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}

/// A non-fatal diagnostic attached to a result computed outside the regime in
/// which the underlying approximation has been argued to hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidityWarning {
    /// Thermal occupation above the small-`n_b` regime (threshold 0.5).
    LargeThermalOccupation { n_thermal: f64 },
    /// κ/g not small: the secular (rotating-term) approximation degrades.
    WeakCoupling { kappa_over_g: f64 },
    /// Mean photon number too small for the large-n̄ resummation.
    SmallMeanPhotonNumber { nbar: f64 },
    /// Damping rate α at n̄ not small compared to g.
    StrongDamping { alpha: f64, g: f64 },
}

impl fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ValidityWarning::LargeThermalOccupation { n_thermal } => write!(
                f,
                "thermal occupation n_b = {n_thermal} is outside the small-n_b regime (> 0.5)"
            ),
            ValidityWarning::WeakCoupling { kappa_over_g } => write!(
                f,
                "kappa/g = {kappa_over_g:.3} is not small; secular approximation is marginal"
            ),
            ValidityWarning::SmallMeanPhotonNumber { nbar } => {
                write!(f, "nbar = {nbar} is small for the large-nbar resummation")
            }
            ValidityWarning::StrongDamping { alpha, g } => write!(
                f,
                "damping rate alpha = {alpha:e} s^-1 is not small compared to g = {g:e} s^-1"
            ),
        }
    }
}
