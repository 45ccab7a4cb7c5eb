//! Numerical solution of the secular rate equations
//!
//! `Ḟ_n = −α_n F_n + β_n F_{n+1} + γ_n F_{n−1}`, `n = −1, 0, …, N−1`,
//!
//! with `γ_{−1} = 0` and `F_N ≡ 0`. Unlike the closed form, the `γ_n F_{n−1}`
//! gain is kept, so this is the reference for the secular approximation alone.

use alloc::vec;
use alloc::vec::Vec;

use super::integrator::Dopri5;
use crate::dissipative::{rate_coefficients, DampingParams};
use crate::Result;

/// `(F_n for n = 0..len, F_{−1})` at each requested time, starting from
/// `F_n(0) = initial[n]`, `F_{−1}(0) = initial_ground`.
pub fn secular_populations(
    initial: &[f64],
    initial_ground: f64,
    damping: &DampingParams,
    times: &[f64],
    tol: f64,
) -> Result<Vec<(Vec<f64>, f64)>> {
    let len = initial.len();
    // y[0] = F_{−1}, y[k] = F_{k−1}
    let rates = (-1..len as isize)
        .map(|n| rate_coefficients(damping, n))
        .collect::<Result<Vec<_>>>()?;
    let mut y = vec![0.0; len + 1];
    y[0] = initial_ground;
    y[1..].copy_from_slice(initial);
    let mut out = Vec::with_capacity(times.len());
    Dopri5::new(tol)?.run(
        |_, y, dy| {
            for k in 0..y.len() {
                let r = &rates[k];
                let mut v = -r.alpha * y[k];
                if k + 1 < y.len() {
                    v += r.beta * y[k + 1];
                }
                if k >= 1 {
                    v += r.gamma * y[k - 1];
                }
                dy[k] = v;
            }
        },
        0.0,
        &mut y,
        times,
        |_, _, y| out.push((y[1..].to_vec(), y[0])),
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissipative::f_star;
    use crate::photon_states::coherent_distribution;

    #[test]
    fn matches_closed_form_at_zero_temperature() {
        let p = coherent_distribution(3.0, 30).unwrap();
        let d = DampingParams::new(1.0, 0.0).unwrap();
        let out = secular_populations(p.probs(), 0.0, &d, &[0.2, 0.7], 1e-12).unwrap();
        for ((f, _), t) in out.iter().zip([0.2, 0.7]) {
            let exact = f_star(&p, &d, t).unwrap();
            for (a, b) in f.iter().zip(&exact) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conserves_weight() {
        let p = coherent_distribution(3.0, 30).unwrap();
        let d = DampingParams::new(1.0, 0.3).unwrap();
        for (f, g) in secular_populations(p.probs(), 0.0, &d, &[0.1, 0.5, 1.0], 1e-12).unwrap() {
            let total: f64 = f.iter().sum::<f64>() + 0.5 * g;
            // only the top level leaks (F_N ≡ 0 while γ feeds it)
            assert!((total - 1.0).abs() < 1e-8);
        }
    }
}
