//! Invariants, symmetry generators and equivalence checks for second-order
//! hyperbolic equations, real and complex.

pub mod cli;
pub mod equivalence;
pub mod fixtures;
pub mod generators;
pub mod invariants;
pub mod model;
pub mod parser;
pub mod regression;
pub mod symbolic;
