//! Steady-state solvers for the Boltzmann-BGK equation discretized by
//! globally hyperbolic Hermite moment systems.

pub mod collision;
pub mod error;
pub mod fim;
pub mod harness;
pub mod hydro;
pub mod kinetic_state;
pub mod nmg;
pub mod smoothers;
pub mod spatial;
pub mod tensor_basis;

pub use error::{Result, SolverError};
