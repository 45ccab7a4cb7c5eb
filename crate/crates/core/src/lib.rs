//! Damped Jaynes–Cummings dynamics for a single-mode cavity prepared in a
//! Schrödinger-cat (or coherent) state and probed by a stream of excited
//! two-level atoms.
//!
//! The crate has two independent routes to the same physics:
//!
//! * the closed-form route ([`photon_states`], [`jc`], [`dissipative`],
//!   [`observables`], [`asymptotics`]) which evaluates the secular
//!   approximate solution of the damped dressed-state populations, and
//! * a brute-force route ([`oracle`]) integrating the full atom⊗field master
//!   equation in a truncated Fock basis.
//!
//! Everything is `no_std` + `alloc`; IO, configuration and the command line
//! live in the companion `catcavity` crate.
//!
//! Time is measured in seconds and rates in s⁻¹ throughout (ħ = 1).

#![no_std]
// `!(x > 0.0)` is the idiom for rejecting NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod dissipative;
mod error;
pub mod jc;
pub mod numeric;
pub mod observables;
pub mod oracle;
pub mod photon_states;

pub use error::{Error, Result, ValidityWarning};

pub use num_complex::Complex64;
