//! Truncated Fock-space oracle.
//!
//! Operators are dense `D × D` complex matrices over the number basis
//! `|0⟩ … |D−1⟩`. Truncation artifacts live in the last row and column; the
//! checks in this crate only ever trust the lower part of the ladder.

mod expm;
pub mod json;
mod ket;
mod operator;
mod propagate;

use thiserror::Error;

pub use expm::expm;
pub use ket::{
    coherent_ket, coherent_ket_with_tolerance, displaced_number_ket, expectation, fidelity, number_ket, poisson_tail,
    Ket, TAIL_TOLERANCE,
};
pub use operator::{displacement_matrix, hamiltonians, ladder_matrices, matrix_of, FockOperator, Hamiltonians};
pub use propagate::{
    schrodinger_evolve, DisplacementProfile, Hold, Method, Propagation, PropagatorConfig, DEFAULT_DRIFT_LIMIT,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("Fock dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("truncation: tail mass {tail_mass:.3e} beyond D = {dim} exceeds {tolerance:.1e}; increase D")]
    Truncation { dim: usize, tail_mass: f64, tolerance: f64 },
    #[error("level {n} requires n < D/2 (D = {dim})")]
    LevelOutOfRange { n: usize, dim: usize },
    #[error("norm drift {drift:.3e} exceeds {limit:.1e}; use more steps per period")]
    NormDrift { drift: f64, limit: f64 },
    #[error("invalid propagation input: {0}")]
    InvalidInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self, FockError> {
        if dim < 2 {
            return Err(FockError::InvalidDimension(dim));
        }
        Ok(Self { dim })
    }

    /// `max(32, ⌈(|α| + 4)²⌉ + n_max)`
    pub fn sized_for(alpha_mag: f64, n_max: usize) -> Self {
        let poisson = ((alpha_mag + 4.0).powi(2)).ceil() as usize + n_max;
        Self { dim: poisson.max(32) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn check(&self, other: &FockSpace) -> Result<(), FockError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(FockError::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }
}
