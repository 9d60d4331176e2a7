//! Non-stopping timeness of last passage times.
//!
//! For a random time `G` with Azéma supermartingale `Z_t = P(G > t | F_t)`,
//! the function `m(t) = E[Z_t(1 - Z_t)] = E[(1_{G>=t} - Z_t)^2]` measures how
//! far `G` is from being a stopping time. This crate evaluates `m` in closed
//! form for three last-passage families, maximizes it, and checks every
//! closed form against independent Monte Carlo estimators.
//!
//! The crate is `no_std` (it needs `alloc`); file formats, the command line
//! and threaded execution live in the `nst` companion crate.
#![no_std]
// Whenever std is linked into the build (tests, the `std` feature, or a
// dependency), its inherent float methods shadow `Float`.
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod models;
pub mod montecarlo;
pub mod numerics;

pub use models::{ModelError, ModelSpec};
pub use montecarlo::{McEstimate, SimConfig};
