//! Ground-state energies of the asymmetric Little model.
//!
//! The max form `xi_p = max_{x,y} y^T H x` and the minmax form
//! `xi_n = min_x max_y y^T H x`, with `x` in `{±1/sqrt(n)}^n`, `y` in
//! `{±1/sqrt(m)}^m` and `H` an `m x n` disorder matrix, are solved exactly by
//! Gray-code enumeration ([`solvers`]), bracketed by closed-form and
//! optimized asymptotic bounds ([`bounds`]), and averaged over seeded
//! disorder ([`harness`]).

pub mod bounds;
pub mod cli;
pub mod error;
pub mod harness;
pub mod instance;
pub mod optimize;
pub mod report;
pub mod solvers;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
