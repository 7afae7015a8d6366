//! Synthesis and analysis of online algorithms with bounded lookback for
//! local optimization problems on sequences.

pub mod cost;
pub mod debruijn;
pub mod error;
pub mod harness;
pub mod policy;
pub mod problem;
pub mod ratio;
pub mod synthesis;
pub mod window;

pub use cost::{ExtendedCost, Rational};
pub use error::{Error, Result};
pub use problem::{Aggregation, Alphabet, LocalProblem, Objective};
