//! Atom⊗field density operator in the bare basis `|n, s⟩`.
//!
//! Index of `|n, s⟩` is `2n` for the excited atom and `2n + 1` for the ground
//! atom, so the matrix has dimension `2(N + 1)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// unused whenever std is in the build graph, which supplies the same methods inherently
#[allow(unused_imports)]
use num_traits::Float;

use crate::photon_states::{cat_amplitudes, coherent_amplitudes, CatSpec, PhotonDistribution};
use crate::{Error, Result};

/// Atomic state label in the bare basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Excited,
    Ground,
}

impl Atom {
    #[inline]
    pub(crate) fn offset(self) -> usize {
        match self {
            Atom::Excited => 0,
            Atom::Ground => 1,
        }
    }
}

#[inline]
pub fn bare_index(n: usize, atom: Atom) -> usize {
    2 * n + atom.offset()
}

/// Photon number and atom of a bare index.
#[inline]
pub fn bare_state(index: usize) -> (usize, Atom) {
    let atom = if index.is_multiple_of(2) { Atom::Excited } else { Atom::Ground };
    (index / 2, atom)
}

/// JC excitation number: `n + 1` for `|n, +⟩`, `n` for `|n, −⟩`.
#[inline]
pub fn excitation(index: usize) -> usize {
    let (n, atom) = bare_state(index);
    match atom {
        Atom::Excited => n + 1,
        Atom::Ground => n,
    }
}

/// Initial cavity field for the oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialField {
    Cat(CatSpec),
    Coherent(f64),
    /// Arbitrary pure state given by Fock amplitudes (need not be normalised).
    Amplitudes(Vec<Complex64>),
    /// Diagonal mixed state.
    Mixed(PhotonDistribution),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    truncation: usize,
    data: Vec<Complex64>,
    time: f64,
}

/// Excited atom tensored with the given field, at `t = 0`.
pub fn build_initial_state(field: &InitialField, truncation: usize) -> Result<DensityMatrix> {
    match field {
        InitialField::Cat(spec) => pure_excited(&cat_amplitudes(spec, truncation)?),
        InitialField::Coherent(intensity) => {
            pure_excited(&coherent_amplitudes(*intensity, truncation)?)
        }
        InitialField::Amplitudes(amps) => {
            if amps.len() != truncation + 1 {
                return Err(Error::invalid("truncation", "does not match the amplitude vector"));
            }
            pure_excited(amps)
        }
        InitialField::Mixed(p) => {
            if p.truncation() != truncation {
                return Err(Error::invalid("truncation", "does not match the distribution"));
            }
            let mut field = vec![Complex64::default(); (truncation + 1) * (truncation + 1)];
            for (n, &pn) in p.probs().iter().enumerate() {
                field[n * (truncation + 1) + n] = Complex64::new(pn, 0.0);
            }
            DensityMatrix::excited_with_field(&field, truncation)
        }
    }
}

fn pure_excited(amps: &[Complex64]) -> Result<DensityMatrix> {
    let truncation = amps.len() - 1;
    let len = amps.len();
    let mut field = vec![Complex64::default(); len * len];
    for n in 0..len {
        for m in 0..len {
            field[n * len + m] = amps[n] * amps[m].conj();
        }
    }
    DensityMatrix::excited_with_field(&field, truncation)
}

impl DensityMatrix {
    pub fn zeros(truncation: usize, time: f64) -> Self {
        let d = 2 * (truncation + 1);
        Self {
            truncation,
            data: vec![Complex64::default(); d * d],
            time,
        }
    }

    /// `ρ_C ⊗ |+⟩⟨+|` for a row-major `(N+1)²` field matrix; weight is kept.
    pub fn excited_with_field(field: &[Complex64], truncation: usize) -> Result<Self> {
        let len = truncation + 1;
        if field.len() != len * len {
            return Err(Error::invalid("field", "matrix has the wrong dimension"));
        }
        let mut rho = Self::zeros(truncation, 0.0);
        for n in 0..len {
            for m in 0..len {
                rho.set(bare_index(n, Atom::Excited), bare_index(m, Atom::Excited), field[n * len + m]);
            }
        }
        Ok(rho)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        2 * (self.truncation + 1)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        let d = self.dim();
        self.data[i * d + j] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `max |ρ_ij − ρ_ji*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `Tr ρ²` for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Whether `ρ + shift·I` admits a Cholesky factorisation, i.e. no
    /// eigenvalue of ρ lies below `−shift`.
    pub fn is_positive_within(&self, shift: f64) -> bool {
        let d = self.dim();
        let mut l = vec![Complex64::default(); d * d];
        for j in 0..d {
            let mut diag = self.get(j, j).re + shift;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if !(diag > 0.0) {
                return false;
            }
            let ljj = diag.sqrt();
            l[j * d + j] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..d {
                let mut acc = 0.5 * (self.get(i, j) + self.get(j, i).conj());
                for k in 0..j {
                    acc -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = acc / ljj;
            }
        }
        true
    }

    /// Probability of finding the atom excited.
    pub fn p_excited(&self) -> f64 {
        (0..=self.truncation)
            .map(|n| self.get(bare_index(n, Atom::Excited), bare_index(n, Atom::Excited)).re)
            .sum()
    }

    /// Unnormalised photon populations conditioned on the atom state.
    pub fn conditioned_populations(&self, atom: Atom) -> Vec<f64> {
        (0..=self.truncation)
            .map(|n| self.get(bare_index(n, atom), bare_index(n, atom)).re)
            .collect()
    }

    /// Field block `⟨n, s|ρ|m, s⟩` for one atomic state, row-major.
    pub fn field_block(&self, atom: Atom) -> Vec<Complex64> {
        let len = self.truncation + 1;
        let mut out = vec![Complex64::default(); len * len];
        for n in 0..len {
            for m in 0..len {
                out[n * len + m] = self.get(bare_index(n, atom), bare_index(m, atom));
            }
        }
        out
    }

    /// Reduced field state `Tr_A ρ`, row-major.
    pub fn field_matrix(&self) -> Vec<Complex64> {
        let mut out = self.field_block(Atom::Excited);
        for (o, g) in out.iter_mut().zip(self.field_block(Atom::Ground)) {
            *o += g;
        }
        out
    }

    pub fn photon_populations(&self) -> Vec<f64> {
        let e = self.conditioned_populations(Atom::Excited);
        let g = self.conditioned_populations(Atom::Ground);
        e.iter().zip(&g).map(|(a, b)| a + b).collect()
    }

    pub fn mean_photons(&self) -> f64 {
        self.photon_populations()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// `⟨(−1)^{a†a}⟩`.
    pub fn field_parity(&self) -> f64 {
        self.photon_populations()
            .iter()
            .enumerate()
            .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
            .sum()
    }

    /// Dressed populations `F_n = ρ_{n+,n+} + ρ_{n+1−,n+1−}` for
    /// `n = 0..N−1`, and `F_{−1} = 2ρ_{0−,0−}`.
    pub fn dressed_sums(&self) -> (Vec<f64>, f64) {
        let f = (0..self.truncation)
            .map(|n| {
                self.get(bare_index(n, Atom::Excited), bare_index(n, Atom::Excited)).re
                    + self.get(bare_index(n + 1, Atom::Ground), bare_index(n + 1, Atom::Ground)).re
            })
            .collect();
        let g = bare_index(0, Atom::Ground);
        (f, 2.0 * self.get(g, g).re)
    }

    /// Element between bare states.
    pub fn bare(&self, n: usize, a: Atom, m: usize, b: Atom) -> Complex64 {
        self.get(bare_index(n, a), bare_index(m, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_a_matrix_unit() {
        let rho = build_initial_state(&InitialField::Coherent(0.0), 8).unwrap();
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                let expected = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(rho.get(i, j), Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn even_cat_has_no_odd_components() {
        let rho = build_initial_state(&InitialField::Cat(CatSpec::even(4.0).unwrap()), 40).unwrap();
        let field = rho.field_matrix();
        let len = 41;
        for n in 0..len {
            for m in 0..len {
                if n % 2 == 1 || m % 2 == 1 {
                    assert_eq!(field[n * len + m], Complex64::default());
                }
            }
        }
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        assert!((rho.field_parity() - 1.0).abs() < 1e-10);
        assert!(rho.hermiticity_defect() < 1e-15);
        assert!(rho.is_positive_within(1e-8));
    }

    #[test]
    fn degenerate_cat_is_rejected() {
        let odd_vacuum = CatSpec::new(0.0, core::f64::consts::PI).unwrap();
        assert!(build_initial_state(&InitialField::Cat(odd_vacuum), 8).is_err());
    }

    #[test]
    fn detects_negative_eigenvalue() {
        let mut rho = DensityMatrix::zeros(1, 0.0);
        rho.set(0, 0, Complex64::new(0.5, 0.0));
        rho.set(1, 1, Complex64::new(0.5, 0.0));
        rho.set(0, 1, Complex64::new(0.6, 0.0));
        rho.set(1, 0, Complex64::new(0.6, 0.0));
        assert!(!rho.is_positive_within(1e-8));
    }

    #[test]
    fn indexing_round_trip() {
        for i in 0..20 {
            let (n, a) = bare_state(i);
            assert_eq!(bare_index(n, a), i);
        }
        assert_eq!(excitation(bare_index(3, Atom::Excited)), 4);
        assert_eq!(excitation(bare_index(3, Atom::Ground)), 3);
    }
}
