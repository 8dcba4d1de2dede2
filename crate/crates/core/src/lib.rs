//! Numerical laboratory for fractional Schrödinger means `e^{it|D|^a}` and
//! their maximal functions along decreasing time sequences.

// `!(x > 0.0)` style guards reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterexample;
pub mod error;
pub mod experiment;
pub mod maximal;
pub mod propagator;
pub mod quadrature;
pub mod regression;
pub mod sequences;
pub mod spectral;

pub use error::{LabError, Result};
