pub mod combinatorics;
pub mod cli;
pub mod cubature;
pub mod error;
pub mod exact_integration;
pub mod functions;
pub mod geometry;
pub mod polynomial;
pub mod relaxations;
pub mod scalar;

pub use error::{Error, ErrorKind, Result};
pub use scalar::{Rational, Scalar, Value};
