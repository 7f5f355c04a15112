//! Corank statistics of structured random matrices over F2 and their
//! convergence to the Cohen–Lenstra law.

pub mod arith;
mod error;
pub mod experiments;
pub mod f2linalg;
pub mod markov;
pub mod rules;

pub use error::{Error, Result};
