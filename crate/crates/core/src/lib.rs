//! Numerical tools for the Bohnenblust–Hille and Hardy–Littlewood
//! inequalities: closed-form constant bounds, exponent interpolation, and
//! brute-force and heuristic checks on explicit multilinear forms.

// `!(x > y)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod exponents;
pub mod khinchine;
pub mod scalar;
pub mod verifier;

pub use error::{Error, Result, Violation};
pub use khinchine::ScalarField;
pub use scalar::ExtendedReal;
