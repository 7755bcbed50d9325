// NaN inputs must fail range checks, so `!(x > a)` is preferred over `x <= a`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Published coefficients and frozen oracle values keep all their digits.
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod jets;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod riccati;
pub mod specfun;
pub mod spectrum;
pub mod traceid;

pub use error::{Error, Result};
