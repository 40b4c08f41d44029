//! Normal-ordered boson algebra, a truncated Fock-space oracle, and the
//! single-mode cavity field built on both.
//!
//! * [`algebra`]: exact operator polynomials and their expectation values in
//!   coherent and displaced number states.
//! * [`fock`]: dense truncated matrices, kets, displacement operators and a
//!   fixed-step time propagator, used to cross-check the algebra.
//! * [`field`]: electric, magnetic and perturbed field operators, sampled
//!   expectation series, phase-lattice mode fits and the verification report.
//! * [`transition`]: ramped `H_α → H` transitions and the two-slit fringe model.

pub mod algebra;
pub mod field;
pub mod fock;
pub mod transition;

pub use num_complex::Complex64 as C64;
