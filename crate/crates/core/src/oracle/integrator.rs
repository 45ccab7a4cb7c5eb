//! Adaptive Dormand–Prince 5(4) stepping with exact landing on sample times.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Element type the stepper can advance.
pub trait OdeScalar:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl OdeScalar for f64 {
    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl OdeScalar for Complex64 {
    #[inline]
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Smallest accepted step relative to `max(|t|, span)`.
    pub min_step_ratio: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::invalid("tol", "must be positive and finite"));
        }
        Ok(Self {
            rtol: tol,
            atol: tol,
            max_steps: 50_000_000,
            min_step_ratio: 1e-14,
        })
    }

    /// Advances `y` from `t0` through the sorted `times`, calling `observe`
    /// with the state at each of them.
    pub fn run<T, F, O>(
        &self,
        mut rhs: F,
        t0: f64,
        y: &mut [T],
        times: &[f64],
        mut observe: O,
    ) -> Result<StepStats>
    where
        T: OdeScalar,
        F: FnMut(f64, &[T], &mut [T]),
        O: FnMut(usize, f64, &[T]),
    {
        if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
            return Err(Error::invalid("times", "must be sorted and not before t0"));
        }
        let n = y.len();
        let mut k: Vec<Vec<T>> = vec![vec![T::default(); n]; 7];
        let mut stage = vec![T::default(); n];
        let mut next = vec![T::default(); n];
        let mut stats = StepStats::default();
        let mut t = t0;
        let span = times.last().map_or(0.0, |&last| last - t0);

        rhs(t, y, &mut k[0]);
        stats.evaluations += 1;
        let mut h = self.initial_step(y, &k[0], span);

        for (idx, &target) in times.iter().enumerate() {
            while t < target {
                let remaining = target - t;
                let hitting = h >= remaining * (1.0 - 1e-12);
                let step = if hitting { remaining } else { h };

                for s in 1..7 {
                    for i in 0..n {
                        let mut acc = y[i];
                        for (j, kj) in k.iter().enumerate().take(s) {
                            let a = A[s][j];
                            if a != 0.0 {
                                acc = acc + kj[i] * (step * a);
                            }
                        }
                        stage[i] = acc;
                    }
                    rhs(t + C[s] * step, &stage, &mut k[s]);
                }
                stats.evaluations += 6;
                // stage 7 was evaluated at the fifth-order solution
                next.copy_from_slice(&stage);

                let mut err = 0.0;
                for i in 0..n {
                    let mut e = T::default();
                    for (j, kj) in k.iter().enumerate() {
                        if E[j] != 0.0 {
                            e = e + kj[i] * (step * E[j]);
                        }
                    }
                    let scale = self.atol + self.rtol * y[i].magnitude().max(next[i].magnitude());
                    err = f64::max(err, e.magnitude() / scale);
                }

                stats.steps += 1;
                if stats.steps > self.max_steps {
                    return Err(Error::TooManySteps(self.max_steps));
                }
                if err <= 1.0 {
                    t = if hitting { target } else { t + step };
                    y.copy_from_slice(&next);
                    k.swap(0, 6);
                    let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    let proposal = step * grow;
                    h = if hitting { h.max(proposal) } else { proposal };
                } else {
                    stats.rejected += 1;
                    h = step * (0.9 * err.powf(-0.2)).max(0.2);
                    if h < self.min_step_ratio * t.abs().max(span) {
                        return Err(Error::StepSizeUnderflow { t, step: h });
                    }
                }
            }
            observe(idx, t, y);
        }
        Ok(stats)
    }

    fn initial_step<T: OdeScalar>(&self, y: &[T], f: &[T], span: f64) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for (yi, fi) in y.iter().zip(f) {
            let scale = self.atol + self.rtol * yi.magnitude();
            d0 += (yi.magnitude() / scale).powi(2);
            d1 += (fi.magnitude() / scale).powi(2);
        }
        let h = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * (d0 / d1).sqrt()
        };
        if span > 0.0 {
            h.min(span)
        } else {
            h
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
}
