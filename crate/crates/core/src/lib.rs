//! Numerical laboratory for Littlewood-Paley analysis on a periodic grid.
//!
//! The crate builds a smooth dyadic filter bank, evaluates Besov and
//! Triebel-Lizorkin quasi-norms by quadrature, and studies the operator
//! `Tf = Σ_j τ_{y_j}(φ_j * f)` that translates each frequency band by its own
//! vector. The [`counterexample`] module constructs inputs on which `T` stays
//! bounded in Besov norms while its Triebel-Lizorkin norms grow without bound.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod counterexample;
pub mod cutoff;
pub mod error;
pub mod grid;
pub mod lp_family;
pub mod norms;
pub mod numerics;
pub mod operator_t;
pub mod sample;
pub mod tolerances;

pub use error::{Error, Result};
pub use grid::{GridSpec, SampledField};
