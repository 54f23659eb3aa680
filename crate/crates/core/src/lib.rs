//! Magnetic field of coaxial massive turns, the TEAM uniform-field coil
//! benchmark built on it, and an NSGA-II optimizer to search its Pareto
//! front.

pub mod benchmark;
pub mod error;
pub mod field;
pub mod moo;
pub mod oracle;
pub mod pipeline;
pub mod quadrature;
pub mod runio;
pub mod validation;

pub use error::{Error, Result};
