//! Numerical construction and verification of axially symmetric quadrature
//! domains in R⁴ whose boundaries are not algebraic, together with the
//! classical planar examples, the monodromy of the associated elliptic
//! integral, and Laplacian-growth trajectories through the family.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
pub mod conformal;
pub mod continuation;
pub mod elliptic;
pub mod error;
pub mod growth;
pub mod moments;
pub mod quad;

pub use conformal::{BoundaryCurve, CircleGrid, ConformalMap, MapParams, PaperMap};
pub use error::{Error, Result};
pub use num_complex::Complex64;
