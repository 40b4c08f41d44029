use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{FockError, Ket};
use crate::C64;

pub const DEFAULT_DRIFT_LIMIT: f64 = 1e-7;

/// Time profile `g(t)` of the displacement, `α(t) = α₀ g(t)` on `[0, duration]`.
pub trait DisplacementProfile {
    fn value(&self, t: f64) -> f64;
    fn duration(&self) -> f64;
}

/// `g ≡ 1` for a fixed time: the static displaced oscillator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hold {
    pub duration: f64,
}

impl DisplacementProfile for Hold {
    fn value(&self, _t: f64) -> f64 {
        1.0
    }

    fn duration(&self) -> f64 {
        self.duration
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Two-exponential commutator-free Magnus scheme at the Gauss nodes.
    #[default]
    Magnus4,
    /// Classical Runge-Kutta; not norm preserving.
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    pub steps_per_period: usize,
    /// Floor on the step count, so short ramps still resolve `g(t)`.
    pub min_steps: usize,
    pub method: Method,
    pub drift_limit: f64,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self { steps_per_period: 256, min_steps: 64, method: Method::Magnus4, drift_limit: DEFAULT_DRIFT_LIMIT }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Propagation {
    pub ket: Ket,
    pub norm_drift: f64,
    pub steps: usize,
}

/// `diag(d) + β a† + β* a`, the shape every displaced oscillator Hamiltonian takes.
struct Tridiagonal {
    diag: Vec<f64>,
    beta: C64,
    sqrt: Vec<f64>,
}

impl Tridiagonal {
    fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        let d = v.len();
        DVector::from_fn(d, |j, _| {
            let mut acc = v[j] * self.diag[j];
            if j > 0 {
                acc += self.beta * self.sqrt[j] * v[j - 1];
            }
            if j + 1 < d {
                acc += self.beta.conj() * self.sqrt[j + 1] * v[j + 1];
            }
            acc
        })
    }

    fn norm_bound(&self) -> f64 {
        let dmax = self.diag.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        dmax + 2.0 * self.beta.norm() * self.sqrt.last().copied().unwrap_or(0.0)
    }

    /// `exp(−iτM)v` by Taylor series on substeps with `‖τM‖ ≤ ½`.
    fn exp_apply(&self, tau: f64, v: &DVector<C64>) -> DVector<C64> {
        let substeps = ((tau.abs() * self.norm_bound()) / 0.5).ceil().max(1.0) as usize;
        let h = tau / substeps as f64;
        let mut out = v.clone();
        for _ in 0..substeps {
            let mut term = out.clone();
            let mut sum = out.clone();
            for k in 1..=40 {
                term = self.apply(&term) * C64::new(0.0, -h / k as f64);
                sum += &term;
                if term.norm() <= 1e-18 * sum.norm() {
                    break;
                }
            }
            out = sum;
        }
        out
    }
}

/// `H(t) = ω((a† − α*)(a − α) + ½)` with `α = α₀ g(t)`, as weighted sums over nodes.
fn hamiltonian(omega: f64, dim: usize, weighted_alphas: &[(f64, C64)]) -> Tridiagonal {
    let weight: f64 = weighted_alphas.iter().map(|(w, _)| w).sum();
    let shift: f64 = weighted_alphas.iter().map(|(w, a)| w * a.norm_sqr()).sum();
    let mean: C64 = weighted_alphas.iter().map(|(w, a)| a * *w).sum();
    Tridiagonal {
        diag: (0..dim).map(|j| omega * ((j as f64 + 0.5) * weight + shift)).collect(),
        beta: -mean * omega,
        sqrt: (0..dim).map(|j| (j as f64).sqrt()).collect(),
    }
}

/// Integrate `i dψ/dt = H(t)ψ` with the Hermitian displaced Hamiltonian.
///
/// The step count is `⌈T ω / 2π · steps_per_period⌉`, at least `min_steps`; `T = 0` returns the
/// input unchanged, which is the sudden limit.
pub fn schrodinger_evolve(
    psi0: &Ket,
    profile: &dyn DisplacementProfile,
    omega: f64,
    alpha0: C64,
    config: &PropagatorConfig,
) -> Result<Propagation, FockError> {
    let duration = profile.duration();
    if !(omega.is_finite() && omega > 0.0) {
        return Err(FockError::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(FockError::InvalidInput(format!("duration must be non-negative, got {duration}")));
    }
    if config.steps_per_period == 0 {
        return Err(FockError::InvalidInput("steps_per_period must be at least 1".into()));
    }
    if duration == 0.0 {
        return Ok(Propagation { ket: psi0.clone(), norm_drift: 0.0, steps: 0 });
    }
    let periods = duration * omega / std::f64::consts::TAU;
    let steps = ((periods * config.steps_per_period as f64).ceil() as usize).max(config.min_steps).max(1);
    let h = duration / steps as f64;
    let dim = psi0.space().dim();
    let alpha_at = |t: f64| alpha0 * profile.value(t);

    let start_norm = psi0.norm();
    let mut v = psi0.amplitudes().clone();
    let s3 = 3f64.sqrt();
    let (c1, c2) = (0.5 - s3 / 6.0, 0.5 + s3 / 6.0);
    let (w1, w2) = (0.25 + s3 / 6.0, 0.25 - s3 / 6.0);
    for step in 0..steps {
        let t = step as f64 * h;
        v = match config.method {
            Method::Magnus4 => {
                let (a1, a2) = (alpha_at(t + c1 * h), alpha_at(t + c2 * h));
                let first = hamiltonian(omega, dim, &[(w1, a1), (w2, a2)]);
                let second = hamiltonian(omega, dim, &[(w2, a1), (w1, a2)]);
                second.exp_apply(h, &first.exp_apply(h, &v))
            }
            Method::Rk4 => {
                let rhs = |tt: f64, x: &DVector<C64>| hamiltonian(omega, dim, &[(1.0, alpha_at(tt))]).apply(x) * C64::new(0.0, -1.0);
                let k1 = rhs(t, &v);
                let k2 = rhs(t + h / 2.0, &(&v + &k1 * C64::from(h / 2.0)));
                let k3 = rhs(t + h / 2.0, &(&v + &k2 * C64::from(h / 2.0)));
                let k4 = rhs(t + h, &(&v + &k3 * C64::from(h)));
                &v + (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(h / 6.0)
            }
        };
    }
    let ket = Ket::from_amplitudes(psi0.space(), v, psi0.tail_mass())?;
    let norm_drift = (ket.norm() - start_norm).abs();
    if norm_drift.is_nan() || norm_drift > config.drift_limit {
        return Err(FockError::NormDrift { drift: norm_drift, limit: config.drift_limit });
    }
    Ok(Propagation { ket, norm_drift, steps })
}
