//! Cosine-mode decomposition of real expectation signals.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::scalar::TimeScalar;
use super::AlgebraError;

/// Signals whose imaginary RMS exceeds this (relative to their scale) are not real.
pub const REALITY_TOLERANCE: f64 = 1e-12;
/// Amplitudes below this are reported as structural zeros.
pub const ZERO_AMPLITUDE: f64 = 1e-10;

/// One term `amplitude · cos(harmonic·ωt − phase)`, or a constant when
/// `harmonic == 0` (then `phase` is `None`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub amplitude: f64,
    pub phase: Option<f64>,
    pub harmonic: u32,
    /// `d` when the phase is exactly `d·θ`.
    pub theta_multiple: Option<i64>,
}

/// Amplitude attached to one point `d·θ` of the phase lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeAmplitude {
    pub theta_multiple: i64,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeList {
    pub modes: Vec<Mode>,
    /// Per-lattice-point amplitudes before any merging, zeros included.
    pub lattice: Vec<LatticeAmplitude>,
    /// Lattice points whose amplitude vanished.
    pub structural_zeros: Vec<i64>,
    /// RMS misfit of the reconstruction against the source.
    pub residual: f64,
    /// RMS of the discarded imaginary part.
    pub imag_residual: f64,
    /// Distinct lattice points landed on the same phase modulo 2π and were merged.
    pub degenerate: bool,
}

impl ModeList {
    pub fn eval(&self, omega: f64, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| match m.phase {
                None => m.amplitude,
                Some(phi) => m.amplitude * (m.harmonic as f64 * omega * t - phi).cos(),
            })
            .sum()
    }

    /// Lattice multiples carrying a nonzero amplitude, descending.
    pub fn active_multiples(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .lattice
            .iter()
            .filter(|l| l.amplitude.abs() > ZERO_AMPLITUDE)
            .map(|l| l.theta_multiple)
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn lattice_amplitude(&self, multiple: i64) -> Option<f64> {
        self.lattice.iter().find(|l| l.theta_multiple == multiple).map(|l| l.amplitude)
    }
}

pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if TAU - w < 1e-12 {
        0.0
    } else {
        w
    }
}

pub(crate) fn same_phase(a: f64, b: f64) -> bool {
    let d = (wrap_phase(a) - wrap_phase(b)).abs();
    d < 1e-9 || (TAU - d) < 1e-9
}

/// Mode at phase `φ` that has absorbed one or more lattice contributions.
struct PendingMode {
    harmonic: u32,
    phase: f64,
    amplitude: f64,
    multiple: Option<i64>,
}

/// Merges modes sharing a harmonic and phase modulo 2π. Returns whether any
/// merge happened.
pub(crate) fn merge_modes(
    raw: Vec<(u32, f64, f64, Option<i64>)>,
) -> (Vec<Mode>, bool) {
    let mut pending: Vec<PendingMode> = Vec::new();
    let mut merged = false;
    for (harmonic, phase, amplitude, multiple) in raw {
        if let Some(p) = pending.iter_mut().find(|p| p.harmonic == harmonic && same_phase(p.phase, phase)) {
            p.amplitude += amplitude;
            if p.multiple != multiple {
                p.multiple = None;
            }
            merged = true;
        } else {
            pending.push(PendingMode { harmonic, phase: wrap_phase(phase), amplitude, multiple });
        }
    }
    let mut modes: Vec<Mode> = pending
        .into_iter()
        .filter(|p| p.amplitude.abs() > ZERO_AMPLITUDE)
        .map(|p| Mode {
            amplitude: p.amplitude,
            phase: if p.harmonic == 0 { None } else { Some(p.phase) },
            harmonic: p.harmonic,
            theta_multiple: if p.harmonic == 0 { None } else { p.multiple },
        })
        .collect();
    modes.sort_by(|a, b| {
        a.harmonic
            .cmp(&b.harmonic)
            .then(a.phase.unwrap_or(0.0).total_cmp(&b.phase.unwrap_or(0.0)))
    });
    (modes, merged)
}

/// Rewrites a real signal as `Σ E cos(kωt − φ)` after substituting `α = |α|e^{iθ}`.
///
/// The `e^{−ikωt}` bucket is grouped by `d = p − q` of its `α^p α*^q` terms, so
/// each group contributes at phase `d·θ`; groups whose coefficients combine to a
/// complex number pick up the extra argument. Non-real signals are rejected with
/// their imaginary RMS.
pub fn to_real_modes(s: &TimeScalar, alpha_mag: f64, theta: f64) -> Result<ModeList, AlgebraError> {
    let alpha = C64::from_polar(alpha_mag, theta);
    let imag = s.imaginary_residual(alpha);
    let scale = s
        .numeric_buckets(alpha)
        .values()
        .map(|v| v.norm())
        .fold(1.0_f64, f64::max);
    if imag > REALITY_TOLERANCE * scale {
        return Err(AlgebraError::NonRealSignal { residual: imag });
    }

    let mut raw = Vec::new();
    let mut lattice = Vec::new();
    let mut structural_zeros = Vec::new();
    for (k, poly) in s.buckets() {
        if k > 0 {
            continue;
        }
        if k == 0 {
            raw.push((0, 0.0, poly.eval(alpha).re, None));
            continue;
        }
        let harmonic = k.unsigned_abs();
        let mut groups: BTreeMap<i64, C64> = BTreeMap::new();
        for (p, q, c) in poly.terms() {
            *groups.entry(p as i64 - q as i64).or_default() += c.to_c64() * alpha_mag.powi((p + q) as i32);
        }
        for (&d, &r) in groups.iter().rev() {
            let base = d as f64 * theta;
            let (amp, phase, multiple) = if r.im.abs() <= REALITY_TOLERANCE * r.norm().max(1.0) {
                (2.0 * r.re, base, Some(d))
            } else {
                (2.0 * r.norm(), base + r.arg(), None)
            };
            if harmonic == 1 {
                lattice.push(LatticeAmplitude { theta_multiple: d, amplitude: amp });
                if amp.abs() <= ZERO_AMPLITUDE {
                    structural_zeros.push(d);
                }
            }
            raw.push((harmonic, phase, amp, multiple));
        }
    }
    let (modes, degenerate) = merge_modes(raw);
    let mut out = ModeList {
        modes,
        lattice,
        structural_zeros,
        residual: 0.0,
        imag_residual: imag,
        degenerate,
    };
    out.residual = reconstruction_residual(s, alpha, &out);
    Ok(out)
}

fn reconstruction_residual(s: &TimeScalar, alpha: C64, modes: &ModeList) -> f64 {
    // unit ω; the grid covers one period of the fundamental
    let highest = s.buckets().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0) as usize;
    let samples = 64.max(4 * highest + 4);
    let sq: f64 = (0..samples)
        .map(|j| {
            let t = TAU * j as f64 / samples as f64;
            (s.eval(alpha, 1.0, t).re - modes.eval(1.0, t)).powi(2)
        })
        .sum();
    (sq / samples as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::CoeffPoly;
    use crate::algebra::rational::RationalComplex;
    use std::f64::consts::PI;

    fn standing_wave() -> TimeScalar {
        TimeScalar::from_buckets([(-1, CoeffPoly::alpha()), (1, CoeffPoly::alpha_conj())])
    }

    #[test]
    fn standing_wave_is_one_mode() {
        let m = to_real_modes(&standing_wave(), 1.0, 0.0).unwrap();
        assert_eq!(m.modes.len(), 1);
        assert!((m.modes[0].amplitude - 2.0).abs() < 1e-15);
        assert_eq!(m.modes[0].phase, Some(0.0));
        assert!(m.residual < 1e-14);
    }

    #[test]
    fn phase_follows_theta() {
        let m = to_real_modes(&standing_wave(), 0.7, 1.1).unwrap();
        assert!((m.modes[0].amplitude - 1.4).abs() < 1e-14);
        assert!((m.modes[0].phase.unwrap() - 1.1).abs() < 1e-14);
        assert_eq!(m.modes[0].theta_multiple, Some(1));
    }

    #[test]
    fn non_real_signal_is_rejected() {
        // (α* − α)e^{iωt} + 2α
        let mut e1 = CoeffPoly::alpha_conj();
        e1 = &e1 - &CoeffPoly::alpha();
        let two_alpha = CoeffPoly::alpha().scale(&RationalComplex::integer(2));
        let s = TimeScalar::from_buckets([(1, e1), (0, two_alpha)]);
        let err = to_real_modes(&s, 1.0, PI / 4.0).unwrap_err();
        match err {
            AlgebraError::NonRealSignal { residual } => assert!(residual > 0.1),
            other => panic!("unexpected {other:?}"),
        }
        // real α kills the oscillating term and leaves a constant
        let m = to_real_modes(&s, 0.5, 0.0).unwrap();
        assert_eq!(m.modes.len(), 1);
        assert_eq!(m.modes[0].harmonic, 0);
        assert!((m.modes[0].amplitude - 1.0).abs() < 1e-15);
    }

    #[test]
    fn colliding_phases_merge() {
        // α² α* e^{−iωt} + α e^{−iωt} + c.c.: both at phase θ, no collision;
        // α e^{−iωt} − α* e^{−iωt} at θ = 0 cancels
        let mut p = CoeffPoly::alpha();
        p = &p - &CoeffPoly::alpha_conj();
        let s = TimeScalar::from_buckets([(-1, p.clone()), (1, p.conj())]);
        let m = to_real_modes(&s, 1.0, 0.0).unwrap();
        assert!(m.modes.is_empty());
        assert!(m.degenerate);
        let m = to_real_modes(&s, 1.0, 0.3).unwrap();
        assert_eq!(m.modes.len(), 2);
        assert!(!m.degenerate);
    }

    #[test]
    fn wrap_is_canonical() {
        assert!((wrap_phase(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(wrap_phase(TAU), 0.0);
        assert!(same_phase(0.1, 0.1 + TAU));
    }
}
