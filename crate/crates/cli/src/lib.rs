//! Command-line harness for the damped cat-state cavity model: figure data,
//! validation suites and oracle trajectory dumps.

// `!(x > 0.0)` is the idiom for rejecting NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod figures;
pub mod oracle_dump;
pub mod presets;
pub mod table;
pub mod validate;
