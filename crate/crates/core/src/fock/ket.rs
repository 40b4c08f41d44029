use nalgebra::DVector;

use super::{displacement_matrix, FockError, FockOperator, FockSpace};
use crate::C64;

/// Default bound on the probability a ket may lose to truncation.
pub const TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    space: FockSpace,
    amps: DVector<C64>,
    tail_mass: f64,
}

impl Ket {
    pub fn from_amplitudes(space: FockSpace, amps: DVector<C64>, tail_mass: f64) -> Result<Self, FockError> {
        if amps.len() != space.dim() {
            return Err(FockError::DimensionMismatch { left: space.dim(), right: amps.len() });
        }
        Ok(Self { space, amps, tail_mass })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Ket) -> Result<C64, FockError> {
        self.space.check(&other.space)?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// `op|self⟩`, keeping the recorded tail mass.
    pub fn apply(&self, op: &FockOperator) -> Result<Ket, FockError> {
        self.space.check(&op.space())?;
        Ok(Ket { space: self.space, amps: op.apply(&self.amps), tail_mass: self.tail_mass })
    }

    pub fn normalized(&self) -> Ket {
        let n = self.norm();
        Ket { space: self.space, amps: &self.amps / C64::from(n), tail_mass: self.tail_mass }
    }
}

/// `Σ_{k ≥ D} e^{−x} x^k / k!`, summed directly.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    let mut log_term = -mean;
    for k in 1..=dim {
        log_term += mean.ln() - (k as f64).ln();
    }
    if mean == 0.0 {
        return 0.0;
    }
    let mut term = log_term.exp();
    let mut sum = 0.0;
    let mut k = dim;
    while term > 0.0 && (term > 1e-30 * f64::max(sum, 1e-300) || (k as f64) < mean) {
        sum += term;
        k += 1;
        term *= mean / k as f64;
        if k > dim + 100_000 {
            break;
        }
    }
    sum
}

pub fn number_ket(n: usize, space: FockSpace) -> Result<Ket, FockError> {
    if n >= space.dim() {
        return Err(FockError::LevelOutOfRange { n, dim: space.dim() });
    }
    let mut amps = DVector::<C64>::zeros(space.dim());
    amps[n] = C64::from(1.0);
    Ok(Ket { space, amps, tail_mass: 0.0 })
}

/// `|α⟩` with the analytic amplitudes `e^{−|α|²/2} α^k / √k!`, not renormalised.
pub fn coherent_ket(alpha: C64, space: FockSpace) -> Result<Ket, FockError> {
    coherent_ket_with_tolerance(alpha, space, TAIL_TOLERANCE)
}

pub fn coherent_ket_with_tolerance(alpha: C64, space: FockSpace, tolerance: f64) -> Result<Ket, FockError> {
    let d = space.dim();
    let mean = alpha.norm_sqr();
    let tail_mass = poisson_tail(mean, d);
    if tail_mass > tolerance {
        return Err(FockError::Truncation { dim: d, tail_mass, tolerance });
    }
    let mut amps = DVector::<C64>::zeros(d);
    let mut amp = C64::from((-mean / 2.0).exp());
    amps[0] = amp;
    for k in 1..d {
        amp = amp * alpha / (k as f64).sqrt();
        amps[k] = amp;
    }
    Ok(Ket { space, amps, tail_mass })
}

/// `D(α)|n⟩`, taken from the matrix exponential on a doubled space so the
/// truncated copy keeps its own tail estimate.
pub fn displaced_number_ket(alpha: C64, n: usize, space: FockSpace) -> Result<Ket, FockError> {
    let d = space.dim();
    if 2 * n >= d {
        return Err(FockError::LevelOutOfRange { n, dim: d });
    }
    let wide = FockSpace::new(2 * d)?;
    let disp = displacement_matrix(alpha, wide);
    let column = disp.matrix().column(n);
    let tail_mass: f64 = column.iter().skip(d).map(|z| z.norm_sqr()).sum();
    if tail_mass > TAIL_TOLERANCE {
        return Err(FockError::Truncation { dim: d, tail_mass, tolerance: TAIL_TOLERANCE });
    }
    let amps = DVector::from_iterator(d, column.iter().take(d).copied());
    Ok(Ket { space, amps, tail_mass })
}

/// `⟨ψ|op|ψ⟩`, without dividing by `⟨ψ|ψ⟩`.
pub fn expectation(op: &FockOperator, psi: &Ket) -> Result<C64, FockError> {
    op.space().check(&psi.space)?;
    Ok(psi.amps.dotc(&op.apply(&psi.amps)))
}

/// `|⟨x|y⟩| / (‖x‖‖y‖)`, insensitive to global phase.
pub fn fidelity(x: &Ket, y: &Ket) -> Result<f64, FockError> {
    let overlap = x.inner(y)?.norm();
    let norms = x.norm() * y.norm();
    if norms == 0.0 {
        return Ok(0.0);
    }
    Ok((overlap / norms).min(1.0))
}
