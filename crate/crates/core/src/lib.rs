//! Greedy approximation algorithms over finite-dimensional coordinate spaces.
//!
//! The crate implements the weak greedy algorithm family in `l2` (WGA, TWGA,
//! WOGA, WGAFR, RGA, IA), the dual greedy algorithm in `lp` (DGA), weak
//! thresholding with respect to a basis (WTGA), and remote consecutive
//! projections (WRPA, RP), together with evaluators for the explicit
//! convergence-rate bounds these algorithms satisfy. Every run produces an
//! iteration trace that the [`bounds`] module can check against the bound
//! formulas and the per-step recursions.
//!
//! The crate is `no_std` (with `alloc`); file formats, configuration and the
//! command line live in the companion `greedylab` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod banach;
pub mod bounds;
pub mod dict;
pub mod error;
pub mod hilbert;
mod linalg;
pub mod projections;
pub mod space;
pub mod thresholding;
pub mod weakness;

pub use error::{Error, Result};
pub use space::{SmoothnessMajorant, Vector};
