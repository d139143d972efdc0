#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Nonlocal Laplacian multipliers and nonlocal wave solutions on the torus.

pub mod error;
pub mod harness;
pub mod multiplier;
pub mod quadrature;
pub mod specfun;
pub mod torus;
pub mod wave;

pub use error::{Error, Result};
