//! Ramped switch-off of the displacement, and the two-slit fringe model.

mod slits;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldError;
use crate::fock::{
    displaced_number_ket, fidelity, number_ket, schrodinger_evolve, DisplacementProfile, FockError, FockSpace,
    PropagatorConfig,
};
use crate::C64;

pub use slits::{double_slit_pattern, FloorOrdering, IntensityProfile, SlitGeometry, SlitState, FAR_FIELD_RATIO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampKind {
    Sudden,
    Linear,
    SmoothCosine,
}

/// `g(t)` falling from 1 at `t = 0` to 0 at `t = duration`.
///
/// `duration` is in the same time units as `1/ω`. A sudden schedule has zero
/// duration: the state is carried over unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RampSchedule {
    pub kind: RampKind,
    pub duration: f64,
}

impl RampSchedule {
    pub fn new(kind: RampKind, duration: f64) -> Result<Self, TransitionError> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(TransitionError::InvalidSchedule(format!("duration must be finite and >= 0, got {duration}")));
        }
        if kind == RampKind::Sudden && duration != 0.0 {
            return Err(TransitionError::InvalidSchedule("a sudden schedule has zero duration".into()));
        }
        Ok(Self { kind, duration })
    }

    pub fn sudden() -> Self {
        Self { kind: RampKind::Sudden, duration: 0.0 }
    }

    pub fn linear(duration: f64) -> Result<Self, TransitionError> {
        Self::new(RampKind::Linear, duration)
    }

    pub fn smooth_cosine(duration: f64) -> Result<Self, TransitionError> {
        Self::new(RampKind::SmoothCosine, duration)
    }
}

impl DisplacementProfile for RampSchedule {
    fn value(&self, t: f64) -> f64 {
        if self.duration == 0.0 {
            return if t <= 0.0 { 1.0 } else { 0.0 };
        }
        let s = (t / self.duration).clamp(0.0, 1.0);
        match self.kind {
            RampKind::Sudden => 0.0,
            RampKind::Linear => 1.0 - s,
            RampKind::SmoothCosine => 0.5 * (1.0 + (std::f64::consts::PI * s).cos()),
        }
    }

    fn duration(&self) -> f64 {
        self.duration
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionResult {
    /// `|⟨D(α₀)n|ψ_T⟩|`
    pub fidelity_to_displaced: f64,
    /// `|⟨n|ψ_T⟩|`
    pub fidelity_to_number: f64,
    pub norm_drift: f64,
    pub steps: usize,
    pub schedule: RampSchedule,
}

/// Starts in `D(α₀)|n⟩` and switches the displacement off along `schedule`.
pub fn run_transition(
    alpha0: C64,
    n: usize,
    schedule: &RampSchedule,
    omega: f64,
    space: FockSpace,
    config: &PropagatorConfig,
) -> Result<TransitionResult, TransitionError> {
    let psi0 = displaced_number_ket(alpha0, n, space)?;
    let target = number_ket(n, space)?;
    let run = schrodinger_evolve(&psi0, schedule, omega, alpha0, config)?;
    Ok(TransitionResult {
        fidelity_to_displaced: fidelity(&psi0, &run.ket)?,
        fidelity_to_number: fidelity(&target, &run.ket)?,
        norm_drift: run.norm_drift,
        steps: run.steps,
        schedule: *schedule,
    })
}
