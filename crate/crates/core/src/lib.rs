//! Numerical analysis and mathematical physics: exact combinatorics, series,
//! linear algebra, quadrature, probability laws, calculus, dynamics and the
//! hydrogen atom.

// `!(x > 0.0)` guards reject NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod combinat;
pub mod diff;
pub mod dynamics;
pub mod error;
pub mod hydrogen;
pub mod linalg;
pub mod prob;
pub mod quad;
pub mod series;

pub use error::{Error, Result};

/// A numerical value with an error estimate or bound; which one is stated
/// by the function that returns it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}
