//! Barnes multiple gamma functions, the quantum torus algebra of a refined
//! BPS structure, and closed-form solutions of the associated quantum
//! Riemann-Hilbert problems.

pub mod bernoulli;
pub mod bps;
pub mod error;
pub mod qtorus;
pub mod rhsolver;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
