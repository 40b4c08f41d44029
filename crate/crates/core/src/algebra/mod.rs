//! Exact symbolic algebra of single-mode bosonic operators.
//!
//! Everything here is exact: coefficients are polynomials in `α`, `α*` over
//! complex rationals, operator words are kept normal ordered, and the phase
//! factor `e^{ikωt}` of a Heisenberg-evolved term is carried as the integer `k`.

mod coeff;
mod expr;
pub mod json;
mod modes;
mod rational;
mod scalar;

use thiserror::Error;

pub use coeff::CoeffPoly;
pub use expr::{
    adjoint, atom, combine, displace_by, displace_subst, evolve_phases, multiply, normal_product, Atom,
    Convention, NormalMonomial, OperatorExpr,
};
pub use modes::{to_real_modes, wrap_phase, LatticeAmplitude, Mode, ModeList, REALITY_TOLERANCE, ZERO_AMPLITUDE};
pub(crate) use modes::{merge_modes, same_phase};
pub use rational::RationalComplex;
pub use scalar::{
    coherent_expectation, displaced_sandwich, displaced_state_expectation, displaced_state_expectation_bounded,
    shifted_strings, TimeScalar, DEFAULT_MAX_EXCITATION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("monomial (a†)^{m} a^{n} already carries phase e^({k}iωt); refusing to evolve twice")]
    AlreadyEvolved { m: u32, n: u32, k: i32 },
    #[error("excitation {n} exceeds the configured maximum {max}")]
    ExcitationTooHigh { n: u32, max: u32 },
    #[error("state norm {norm} is not a constant; normalised result is not polynomial")]
    NonConstantNorm { norm: String },
    #[error("signal is not real: imaginary RMS {residual:.3e}")]
    NonRealSignal { residual: f64 },
    #[error("coefficient {0} does not fit the JSON integer range")]
    CoefficientOverflow(String),
    #[error("malformed expression JSON: {0}")]
    Json(String),
}
