//! Quantum torus algebras, their extended versions with meromorphic
//! coefficients, and the automorphisms acting on them.

pub mod automorphism;
pub mod expr;
pub mod extended;
pub mod torus;

pub use automorphism::{ad, check_refinement, dt_adjoint_multiplier, eps_z, s_q_ray, GradedAutomorphism};
pub use expr::{approx_eq, max_difference, sample_points, CoefficientFunction, Node, SamplePoint};
pub use extended::{embed, ext_mul, max_element_difference, ExtendedAlgebra, ExtendedElement};
pub use torus::{qt_mul, LaurentQ, QuantumTorusElement};
