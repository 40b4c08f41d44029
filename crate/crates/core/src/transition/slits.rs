use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::TransitionError;
use crate::algebra::{multiply, normal_product, OperatorExpr};
use crate::field::{electric_field_expr, oracle_buckets, sig17, FieldConfig, FieldState};
use crate::fock::FockSpace;
use crate::C64;

/// Below this `L/d` the far-field phase formula is flagged.
pub const FAR_FIELD_RATIO: f64 = 100.0;
const TIME_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    /// Slit separation.
    pub d: f64,
    /// Slit-to-screen distance.
    pub l: f64,
    /// Screen points.
    pub x: Vec<f64>,
}

impl SlitGeometry {
    pub fn new(d: f64, l: f64, x: Vec<f64>) -> Result<Self, TransitionError> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(TransitionError::InvalidGeometry(format!("slit separation must be >= 0, got {d}")));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(TransitionError::InvalidGeometry(format!("screen distance must be > 0, got {l}")));
        }
        if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
            return Err(TransitionError::InvalidGeometry("screen grid must be non-empty and finite".into()));
        }
        Ok(Self { d, l, x })
    }

    /// `points` equally spaced screen positions on `[−half_width, half_width]`.
    pub fn uniform(d: f64, l: f64, half_width: f64, points: usize) -> Result<Self, TransitionError> {
        if points < 2 || !(half_width.is_finite() && half_width > 0.0) {
            return Err(TransitionError::InvalidGeometry("need at least two points on a positive width".into()));
        }
        let step = 2.0 * half_width / (points - 1) as f64;
        Self::new(d, l, (0..points).map(|j| -half_width + j as f64 * step).collect())
    }

    pub fn wavelength(cfg: &FieldConfig) -> f64 {
        TAU * cfg.c / cfg.omega
    }

    pub fn far_field_ratio(&self) -> f64 {
        if self.d == 0.0 {
            f64::INFINITY
        } else {
            self.l / self.d
        }
    }

    /// `2πd x/(λL)`
    pub fn phase_difference(&self, x: f64, cfg: &FieldConfig) -> f64 {
        TAU * self.d * x / (Self::wavelength(cfg) * self.l)
    }

    /// Screen distance between bright fringes, `λL/d`.
    pub fn fringe_spacing(&self, cfg: &FieldConfig) -> f64 {
        Self::wavelength(cfg) * self.l / self.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlitState {
    Coherent { alpha: C64 },
    Number { n: u32 },
}

impl SlitState {
    fn field_state(self) -> FieldState {
        match self {
            SlitState::Coherent { alpha } => FieldState::Coherent { alpha },
            SlitState::Number { n } => FieldState::Number { n },
        }
    }
}

/// How the second moment in the incoherent floor is ordered.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorOrdering {
    /// `⟨:E²:⟩`, what a photodetector registers; no vacuum contribution.
    #[default]
    NormalOrdered,
    /// `⟨E·E⟩`, including the vacuum fluctuation `ε̃₀² sin²kz`.
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityProfile {
    pub x: Vec<f64>,
    pub intensity: Vec<f64>,
    pub fringe: Vec<f64>,
    pub floor: f64,
    pub visibility: f64,
    pub far_field_ratio: f64,
    pub ordering: FloorOrdering,
    pub warning: Option<String>,
}

impl IntensityProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,intensity,fringe_term,floor\n");
        for j in 0..self.x.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                sig17(self.x[j]),
                sig17(self.intensity[j]),
                sig17(self.fringe[j]),
                sig17(self.floor)
            ));
        }
        out
    }
}

fn eval(buckets: &[(i32, C64)], wt: f64) -> f64 {
    buckets.iter().map(|&(k, v)| (v * C64::from_polar(1.0, k as f64 * wt)).re).sum()
}

/// Two identical slit sources at `cfg.z`, the second delayed by `δ(x)/ω`.
///
/// The fringe term is the period average of `(⟨E⟩(t) + ⟨E⟩(t − δ/ω))²`; each
/// slit adds its own period-averaged variance to a flat floor.
pub fn double_slit_pattern(
    state: SlitState,
    geom: &SlitGeometry,
    cfg: &FieldConfig,
    ordering: FloorOrdering,
    space: Option<FockSpace>,
) -> Result<IntensityProfile, TransitionError> {
    let fs = state.field_state();
    let space = space.unwrap_or_else(|| fs.default_space());
    let (ket, norm) = fs.ket(space)?;
    let alpha = fs.alpha();
    let e = electric_field_expr(cfg);
    let second: OperatorExpr = match ordering {
        FloorOrdering::NormalOrdered => normal_product(&e, &e),
        FloorOrdering::Full => multiply(&e, &e),
    };
    let mean = oracle_buckets(&e, &ket, norm, alpha)?;
    let moment = oracle_buckets(&second, &ket, norm, alpha)?;

    let phases: Vec<f64> = (0..TIME_SAMPLES).map(|j| TAU * j as f64 / TIME_SAMPLES as f64).collect();
    let avg = |f: &dyn Fn(f64) -> f64| phases.iter().map(|&wt| f(wt)).sum::<f64>() / TIME_SAMPLES as f64;
    let mean_sq = avg(&|wt| eval(&mean, wt).powi(2));
    let moment_avg = avg(&|wt| eval(&moment, wt));
    let floor = 2.0 * (moment_avg - mean_sq).max(0.0);

    let fringe: Vec<f64> = geom
        .x
        .iter()
        .map(|&x| {
            let delta = geom.phase_difference(x, cfg);
            avg(&|wt| (eval(&mean, wt) + eval(&mean, wt - delta)).powi(2))
        })
        .collect();
    let intensity: Vec<f64> = fringe.iter().map(|f| f + floor).collect();
    let (lo, hi) = intensity.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let visibility = if hi + lo > 0.0 { ((hi - lo) / (hi + lo)).clamp(0.0, 1.0) } else { 0.0 };

    let ratio = geom.far_field_ratio();
    let warning = (ratio < FAR_FIELD_RATIO)
        .then(|| format!("L/d = {ratio:.3} is below {FAR_FIELD_RATIO}; far-field phase formula is approximate"));
    Ok(IntensityProfile {
        x: geom.x.clone(),
        intensity,
        fringe,
        floor,
        visibility,
        far_field_ratio: ratio,
        ordering,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(d: f64) -> SlitGeometry {
        SlitGeometry::uniform(d, 1000.0, 4000.0, 401).unwrap()
    }

    #[test]
    fn coherent_fringes_are_sharp() {
        let cfg = FieldConfig::default();
        let g = geom(1.0);
        let p = double_slit_pattern(SlitState::Coherent { alpha: C64::from(1.0) }, &g, &cfg, FloorOrdering::default(), None)
            .unwrap();
        assert!(p.visibility >= 0.99, "{}", p.visibility);
        assert!(p.floor.abs() < 1e-10);
        assert!(p.warning.is_none());
        // two-source closed form: 4ε̃₀²|α|²(1 + cos δ)
        for (x, f) in p.x.iter().zip(&p.fringe) {
            let want = 4.0 * (1.0 + g.phase_difference(*x, &cfg).cos());
            assert!((f - want).abs() < 1e-11);
        }
    }

    #[test]
    fn fringe_period() {
        let cfg = FieldConfig::default();
        let g0 = SlitGeometry::new(2.0, 500.0, vec![0.37, 123.4]).unwrap();
        let spacing = g0.fringe_spacing(&cfg);
        let shifted = SlitGeometry::new(2.0, 500.0, g0.x.iter().map(|x| x + spacing).collect()).unwrap();
        let st = SlitState::Coherent { alpha: C64::from_polar(0.7, 0.3) };
        let a = double_slit_pattern(st, &g0, &cfg, FloorOrdering::Full, None).unwrap();
        let b = double_slit_pattern(st, &shifted, &cfg, FloorOrdering::Full, None).unwrap();
        for (u, v) in a.intensity.iter().zip(&b.intensity) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn number_state_has_no_fringes() {
        let cfg = FieldConfig::default();
        for ordering in [FloorOrdering::NormalOrdered, FloorOrdering::Full] {
            let p = double_slit_pattern(SlitState::Number { n: 1 }, &geom(1.0), &cfg, ordering, None).unwrap();
            assert!(p.fringe.iter().all(|f| f.abs() < 1e-10));
            assert!(p.visibility < 1e-10);
            let first = p.intensity[0];
            assert!(p.intensity.iter().all(|i| (i - first).abs() < 1e-12));
            let want = match ordering {
                FloorOrdering::NormalOrdered => 4.0,
                FloorOrdering::Full => 6.0,
            };
            assert!((p.floor - want).abs() < 1e-10, "{ordering:?} {}", p.floor);
        }
    }

    #[test]
    fn zero_separation_is_flat_at_maximum() {
        let cfg = FieldConfig::default();
        let p = double_slit_pattern(SlitState::Coherent { alpha: C64::from(1.0) }, &geom(0.0), &cfg, FloorOrdering::Full, None)
            .unwrap();
        let max = p.intensity.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(p.intensity.iter().all(|i| (i - max).abs() < 1e-12));
        assert!((max - (8.0 + p.floor)).abs() < 1e-11);
        assert!(p.visibility < 1e-12);
    }

    #[test]
    fn visibility_is_scale_free() {
        let g = geom(1.0);
        let st = SlitState::Coherent { alpha: C64::from_polar(0.6, 1.1) };
        for ordering in [FloorOrdering::NormalOrdered, FloorOrdering::Full] {
            let v1 = double_slit_pattern(st, &g, &FieldConfig::default(), ordering, None).unwrap().visibility;
            let cfg = FieldConfig { eps_tilde: 0.125, ..FieldConfig::default() };
            let v2 = double_slit_pattern(st, &g, &cfg, ordering, None).unwrap().visibility;
            assert!((v1 - v2).abs() < 1e-12);
            assert!((0.0..=1.0).contains(&v1));
        }
    }

    #[test]
    fn near_field_is_flagged() {
        let g = SlitGeometry::uniform(20.0, 1000.0, 10.0, 5).unwrap();
        let p = double_slit_pattern(SlitState::Number { n: 0 }, &g, &FieldConfig::default(), FloorOrdering::default(), None)
            .unwrap();
        assert!(p.warning.is_some());
        assert_eq!(p.visibility, 0.0);
    }

    #[test]
    fn csv_layout() {
        let g = SlitGeometry::new(1.0, 1000.0, vec![0.0, 1.0]).unwrap();
        let p = double_slit_pattern(SlitState::Number { n: 1 }, &g, &FieldConfig::default(), FloorOrdering::default(), None)
            .unwrap();
        let csv = p.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,intensity,fringe_term,floor"));
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn geometry_validation() {
        assert!(SlitGeometry::new(-1.0, 1.0, vec![0.0]).is_err());
        assert!(SlitGeometry::new(1.0, 0.0, vec![0.0]).is_err());
        assert!(SlitGeometry::new(1.0, 1.0, vec![]).is_err());
        assert!(SlitGeometry::uniform(1.0, 1.0, 1.0, 1).is_err());
    }
}
