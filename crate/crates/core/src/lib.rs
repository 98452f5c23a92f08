//! Parameterized reductions between k-SUM, k-Vector-SUM, weighted k-Clique
//! variants and unweighted k-Clique, together with the exact solvers used to
//! check that every reduction preserves solvability.

pub mod backward;
pub mod error;
pub mod experiment;
pub mod fieldapps;
pub mod forward;
pub mod generate;
pub mod instances;
pub mod modprime;
pub mod solvers;
pub mod sumfree;

pub use error::{Error, Result};
