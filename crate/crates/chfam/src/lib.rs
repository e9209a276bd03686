//! Periodic pseudospectral laboratory for a family of nonlinear
//! dispersive transport equations of Camassa–Holm type,
//!
//! ```text
//! u_t - u_txx + c_n u^n u_x = lower-order nonlocal terms,   c_n = (n+1)(n+2)/2
//! ```
//!
//! for odd integer nonlinearity exponents `n`. The crate provides the
//! spectral toolbox (FFT derivatives, Helmholtz inversion, dealiasing),
//! the nonlocal flux evaluation, fixed-stage RK4 evolution with CFL
//! stepping and blow-up detection, a library of initial profiles, run
//! diagnostics (conserved functionals, weighted norms, tail fits), and a
//! scenario-based experiment runner with CSV/JSON output.
//!
//! Start from the `examples/` directory: each example is a runnable
//! walkthrough of one capability.

// validation code negates comparisons on purpose: `!(x > 0.0)` also
// rejects NaN, which `x <= 0.0` would let through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolve;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod experiment;
pub mod field;
pub mod grid;
pub mod profiles;
pub mod spectral;
pub mod timestep;

pub use error::{Error, Result};
pub use field::Field;
pub use grid::Grid;
