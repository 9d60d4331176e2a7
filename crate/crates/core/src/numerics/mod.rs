//! Special functions, quadrature and one-dimensional solvers.
//!
//! Everything here is a pure function of its arguments; nothing allocates
//! beyond the quadrature work stack.

mod optimize;
mod quad;
mod special;

pub use optimize::{brent_root, maximize_1d, BracketEdge, MaxResult, RootResult};
pub use quad::{adaptive_quad, adaptive_quad_with, QuadOptions, QuadResult};
pub use special::{
    erfc, erfcx, exp_integral, exp_integral_scaled, lgamma, normal_cdf, normal_pdf, phi_times_exp,
};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum NumericsError {
    #[error("{what} (got {value:?})")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid interval [{lo:?}, {hi:?}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("function is not finite at {at:?}")]
    NonFinite { at: f64 },
    #[error("no sign change on [{lo:?}, {hi:?}]: f(lo) = {f_lo:?}, f(hi) = {f_hi:?}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("quadrature did not converge within depth {depth} near {at:?}")]
    QuadratureDiverged { depth: u32, at: f64 },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
}
