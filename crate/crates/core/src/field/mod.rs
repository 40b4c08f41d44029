//! Single-mode cavity field operators and what can be measured on them.

mod fit;
mod report;
mod series;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{atom, evolve_phases, AlgebraError, Atom, CoeffPoly, OperatorExpr, RationalComplex};
use crate::fock::FockError;

pub use fit::{decompose_modes, lattice_multiples, ModeSource};
pub use report::{verify_report, Check, Report, ReportOptions};
pub(crate) use series::{oracle_buckets, sig17};
pub use series::{expectation_series, paper_displaced_ket, EvalPath, FieldSeries, FieldState, TimeGrid};

/// Mode functions closer to a node than this are treated as exactly zero.
const NODE_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),
    #[error("time grid has {0} samples per period; at least 64 required")]
    GridTooCoarse(usize),
    #[error("signal is not real: imaginary RMS {0:.3e}")]
    NonReal(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub omega: f64,
    pub c: f64,
    pub eps_tilde: f64,
    pub z: f64,
}

impl FieldConfig {
    pub fn new(omega: f64, c: f64, eps_tilde: f64, z: f64) -> Result<Self, FieldError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(omega) || !positive(c) || !positive(eps_tilde) {
            return Err(FieldError::InvalidConfig(format!(
                "omega, c and eps_tilde must be positive (got {omega}, {c}, {eps_tilde})"
            )));
        }
        if !z.is_finite() {
            return Err(FieldError::InvalidConfig(format!("z must be finite, got {z}")));
        }
        Ok(Self { omega, c, eps_tilde, z })
    }

    /// Observation point at the first antinode of `sin kz`.
    pub fn quarter_wave(omega: f64, c: f64, eps_tilde: f64) -> Result<Self, FieldError> {
        Self::new(omega, c, eps_tilde, 0.0).map(|cfg| Self { z: std::f64::consts::FRAC_PI_2 / cfg.wavenumber(), ..cfg })
    }

    pub fn wavenumber(&self) -> f64 {
        self.omega / self.c
    }

    pub fn with_z(self, z: f64) -> Self {
        Self { z, ..self }
    }

    pub fn sin_kz(&self) -> f64 {
        snap_node((self.wavenumber() * self.z).sin())
    }

    pub fn cos_kz(&self) -> f64 {
        snap_node((self.wavenumber() * self.z).cos())
    }

    /// `ε̃₀ sin kz`, the electric prefactor.
    pub fn electric_scale(&self) -> f64 {
        self.eps_tilde * self.sin_kz()
    }

    /// `ε̃₀ cos kz`, the magnetic prefactor.
    pub fn magnetic_scale(&self) -> f64 {
        self.eps_tilde * self.cos_kz()
    }

    /// Period of the mode, `2π/ω`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self { omega: 1.0, c: 1.0, eps_tilde: 1.0, z: std::f64::consts::FRAC_PI_2 }
    }
}

fn snap_node(v: f64) -> f64 {
    if v.abs() < NODE_TOLERANCE {
        0.0
    } else {
        v
    }
}

fn exact(v: f64) -> RationalComplex {
    RationalComplex::from_f64(v).expect("finite prefactor")
}

/// `ε̃₀(a e^{−iωt} + a† e^{iωt}) sin kz`
pub fn electric_field_expr(cfg: &FieldConfig) -> OperatorExpr {
    let q = atom(Atom::Annihilate).add(&atom(Atom::Create));
    let q = evolve_phases(&q).expect("Schrödinger-picture input");
    q.scale(&CoeffPoly::constant(exact(cfg.electric_scale())))
}

/// `cB_y = ε̃₀ i(a† e^{iωt} − a e^{−iωt}) cos kz`
pub fn magnetic_field_expr(cfg: &FieldConfig) -> OperatorExpr {
    let p = atom(Atom::Create).sub(&atom(Atom::Annihilate));
    let p = evolve_phases(&p).expect("Schrödinger-picture input");
    let scale = RationalComplex::i() * exact(cfg.magnetic_scale());
    p.scale(&CoeffPoly::constant(scale))
}

/// The electric field for an oscillator displaced by `α`.
///
/// With `use_alpha_hamiltonian_evolution` the quadrature is evolved under the
/// displaced Hamiltonian and the shift re-enters as a static `+2α`:
/// `ε̃₀(a e^{−iωt} + a† e^{iωt} − α(e^{−iωt} + e^{iωt}) + 2α) sin kz`.
/// Without it the ordinary evolution applies and the field is
/// [`electric_field_expr`].
pub fn perturbed_field_expr(cfg: &FieldConfig, use_alpha_hamiltonian_evolution: bool) -> OperatorExpr {
    let free = electric_field_expr(cfg);
    if !use_alpha_hamiltonian_evolution {
        return free;
    }
    let s = CoeffPoly::constant(exact(cfg.electric_scale()));
    let minus_alpha = &-&CoeffPoly::alpha() * &s;
    let two_alpha = &CoeffPoly::alpha().scale(&RationalComplex::integer(2)) * &s;
    free.add(&OperatorExpr::scalar(minus_alpha.clone(), -1))
        .add(&OperatorExpr::scalar(minus_alpha, 1))
        .add(&OperatorExpr::scalar(two_alpha, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coherent_expectation, to_real_modes, TimeScalar};
    use std::f64::consts::PI;

    #[test]
    fn node_gives_empty_expression() {
        let cfg = FieldConfig::default().with_z(0.0);
        assert!(electric_field_expr(&cfg).is_zero());
        let cfg = FieldConfig::default().with_z(PI);
        assert!(electric_field_expr(&cfg).is_zero());
        assert!(magnetic_field_expr(&FieldConfig::default()).is_zero());
    }

    #[test]
    fn config_validation() {
        assert!(FieldConfig::new(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(FieldConfig::new(1.0, -1.0, 1.0, 0.0).is_err());
        assert!(FieldConfig::new(1.0, 1.0, 1.0, f64::NAN).is_err());
        let cfg = FieldConfig::quarter_wave(2.0, 3.0, 0.5).unwrap();
        assert_eq!(cfg.sin_kz(), 1.0);
        assert_eq!(cfg.wavenumber() * cfg.c, cfg.omega);
    }

    #[test]
    fn coherent_electric_is_standing_wave() {
        let s = coherent_expectation(&electric_field_expr(&FieldConfig::default()));
        let want = TimeScalar::from_buckets([(-1, CoeffPoly::alpha()), (1, CoeffPoly::alpha_conj())]);
        assert_eq!(s, want);
        let modes = to_real_modes(&s, 0.6, 0.9).unwrap();
        assert_eq!(modes.modes.len(), 1);
        assert!((modes.modes[0].amplitude - 1.2).abs() < 1e-15);
        assert!((modes.modes[0].phase.unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn coherent_magnetic_is_sine() {
        let cfg = FieldConfig::default().with_z(0.0);
        let s = coherent_expectation(&magnetic_field_expr(&cfg));
        let (mag, theta) = (0.7, 0.4);
        let alpha = crate::C64::from_polar(mag, theta);
        for j in 0..16 {
            let t = j as f64 * 0.37;
            let v = s.eval(alpha, 1.0, t);
            assert!((v.re + 2.0 * mag * (t - theta).sin()).abs() < 1e-14);
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn perturbed_coherent_expectation() {
        let s = coherent_expectation(&perturbed_field_expr(&FieldConfig::default(), true));
        let want = TimeScalar::from_buckets([
            (1, &CoeffPoly::alpha_conj() - &CoeffPoly::alpha()),
            (0, CoeffPoly::alpha().scale(&RationalComplex::integer(2))),
        ]);
        assert_eq!(s, want);
        assert!(!s.is_real_signal());
        assert!(matches!(to_real_modes(&s, 1.0, PI / 4.0), Err(AlgebraError::NonRealSignal { .. })));
        let real = to_real_modes(&s, 0.3, 0.0).unwrap();
        assert_eq!(real.modes.len(), 1);
        assert_eq!(real.modes[0].harmonic, 0);
        assert!((real.modes[0].amplitude - 0.6).abs() < 1e-15);
        assert_eq!(perturbed_field_expr(&FieldConfig::default(), false), electric_field_expr(&FieldConfig::default()));
    }

    #[test]
    fn prefactor_is_folded_in() {
        let cfg = FieldConfig { eps_tilde: 0.25, ..FieldConfig::default() };
        let s = coherent_expectation(&electric_field_expr(&cfg));
        assert_eq!(s.bucket(-1), CoeffPoly::alpha().scale(&RationalComplex::ratio(1, 4)));
    }
}
