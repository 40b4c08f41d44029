use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use super::{FieldError, FieldSeries};
use crate::algebra::{merge_modes, same_phase, LatticeAmplitude, Mode, ModeList, TimeScalar, ZERO_AMPLITUDE};
use crate::C64;

/// Imaginary RMS tolerated before a signal counts as complex.
const REAL_TOLERANCE: f64 = 1e-9;
const TIME_SAMPLES: usize = 64;

/// What a mode fit is run against.
#[derive(Clone, Copy, Debug)]
pub enum ModeSource<'a> {
    /// A closed form; `α = |α|e^{iθ'}` is swept over `θ'` so every lattice
    /// amplitude is identifiable.
    Symbolic { scalar: &'a TimeScalar, alpha_mag: f64 },
    /// Samples at one fixed `θ`.
    Series(&'a FieldSeries),
}

/// `2n+1−2r` for `r = 0..=2n`, descending.
pub fn lattice_multiples(n: u32) -> Vec<i64> {
    (0..=2 * n as i64).map(|r| 2 * n as i64 + 1 - 2 * r).collect()
}

fn solve(design: DMatrix<f64>, rhs: &DVector<f64>) -> (DVector<f64>, f64) {
    let svd = design.clone().svd(true, true);
    let x = svd.solve(rhs, 1e-12).expect("SVD with both factors");
    let misfit = &design * &x - rhs;
    let rms = (misfit.norm_squared() / rhs.len().max(1) as f64).sqrt();
    (x, rms)
}

/// Fits `Σ_r E_r cos(ωt − (2n+1−2r)θ)` with the phases held fixed.
///
/// A sampled series at a single `θ` only determines the `cos ωt` and `sin ωt`
/// content, so for `n ≥ 1` it is collapsed to one resultant mode and flagged
/// degenerate. A closed form is fitted over a grid in `(t, θ')`; the
/// amplitudes do not depend on `θ'`, and the modes are then placed at the
/// requested `θ`, merging any lattice points that coincide modulo 2π.
pub fn decompose_modes(source: ModeSource<'_>, omega: f64, theta: f64, n: u32) -> Result<ModeList, FieldError> {
    match source {
        ModeSource::Symbolic { scalar, alpha_mag } => fit_symbolic(scalar, alpha_mag, theta, n),
        ModeSource::Series(series) => fit_series(series, omega, theta, n),
    }
}

fn fit_symbolic(s: &TimeScalar, alpha_mag: f64, theta: f64, n: u32) -> Result<ModeList, FieldError> {
    let lattice = lattice_multiples(n);
    let angles = 4 * (2 * n as usize + 2);
    let has_constant = !s.bucket(0).is_zero();
    let cols = lattice.len() + usize::from(has_constant);
    let rows = TIME_SAMPLES * angles;
    let mut design = DMatrix::<f64>::zeros(rows, cols);
    let mut rhs = DVector::<f64>::zeros(rows);
    let mut imag_sq = 0.0;
    let mut scale = 0.0_f64;
    for a in 0..angles {
        let th = TAU * a as f64 / angles as f64;
        let alpha = C64::from_polar(alpha_mag, th);
        for j in 0..TIME_SAMPLES {
            let wt = TAU * j as f64 / TIME_SAMPLES as f64;
            let row = a * TIME_SAMPLES + j;
            let v = s.eval(alpha, 1.0, wt);
            imag_sq += v.im * v.im;
            scale = scale.max(v.norm());
            rhs[row] = v.re;
            for (c, &d) in lattice.iter().enumerate() {
                design[(row, c)] = (wt - d as f64 * th).cos();
            }
            if has_constant {
                design[(row, cols - 1)] = 1.0;
            }
        }
    }
    let imag_residual = (imag_sq / rows as f64).sqrt();
    if imag_residual > REAL_TOLERANCE * scale.max(1.0) {
        return Err(FieldError::NonReal(imag_residual));
    }
    let (x, residual) = solve(design, &rhs);

    let mut amplitudes = Vec::new();
    let mut structural_zeros = Vec::new();
    let mut raw = Vec::new();
    for (c, &d) in lattice.iter().enumerate() {
        let amp = if x[c].abs() <= ZERO_AMPLITUDE { 0.0 } else { x[c] };
        if amp == 0.0 {
            structural_zeros.push(d);
        }
        amplitudes.push(LatticeAmplitude { theta_multiple: d, amplitude: amp });
        raw.push((1, d as f64 * theta, amp, Some(d)));
    }
    if has_constant {
        raw.push((0, 0.0, x[cols - 1], None));
    }
    let (modes, degenerate) = merge_modes(raw);
    let collided = lattice
        .iter()
        .enumerate()
        .any(|(i, &d1)| lattice[i + 1..].iter().any(|&d2| same_phase(d1 as f64 * theta, d2 as f64 * theta)));
    Ok(ModeList {
        modes,
        lattice: amplitudes,
        structural_zeros,
        residual,
        imag_residual,
        degenerate: degenerate || collided,
    })
}

fn fit_series(series: &FieldSeries, omega: f64, theta: f64, n: u32) -> Result<ModeList, FieldError> {
    let imag_residual = series.imag_rms();
    if imag_residual > REAL_TOLERANCE * series.max_abs().max(1.0) {
        return Err(FieldError::NonReal(imag_residual));
    }
    let rows = series.len();
    let rhs = DVector::from_iterator(rows, series.values.iter().map(|v| v.re));
    if n == 0 {
        let design = DMatrix::from_fn(rows, 1, |j, _| (omega * series.t[j] - theta).cos());
        let (x, residual) = solve(design, &rhs);
        let amp = if x[0].abs() <= ZERO_AMPLITUDE { 0.0 } else { x[0] };
        let (modes, _) = merge_modes(vec![(1, theta, amp, Some(1))]);
        return Ok(ModeList {
            modes,
            lattice: vec![LatticeAmplitude { theta_multiple: 1, amplitude: amp }],
            structural_zeros: if amp == 0.0 { vec![1] } else { vec![] },
            residual,
            imag_residual,
            degenerate: false,
        });
    }
    let design = DMatrix::from_fn(rows, 2, |j, c| {
        let wt = omega * series.t[j];
        if c == 0 {
            wt.cos()
        } else {
            wt.sin()
        }
    });
    let (x, residual) = solve(design, &rhs);
    let amplitude = x[0].hypot(x[1]);
    let phase = x[1].atan2(x[0]);
    let multiple = lattice_multiples(n).into_iter().find(|&d| same_phase(d as f64 * theta, phase));
    let modes = if amplitude > ZERO_AMPLITUDE {
        vec![Mode { amplitude, phase: Some(crate::algebra::wrap_phase(phase)), harmonic: 1, theta_multiple: multiple }]
    } else {
        vec![]
    };
    Ok(ModeList { modes, lattice: vec![], structural_zeros: vec![], residual, imag_residual, degenerate: true })
}
