use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{FieldConfig, FieldError};
use crate::algebra::{coherent_expectation, displaced_state_expectation, Convention, OperatorExpr, TimeScalar};
use crate::fock::{
    coherent_ket, displaced_number_ket, expectation, ladder_matrices, matrix_of, number_ket, FockSpace, Ket,
};
use crate::C64;

/// Uniform samples over a whole number of periods, endpoint excluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub periods: usize,
    pub samples_per_period: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { periods: 1, samples_per_period: 64 }
    }
}

impl TimeGrid {
    pub fn new(periods: usize, samples_per_period: usize) -> Result<Self, FieldError> {
        if samples_per_period < 64 {
            return Err(FieldError::GridTooCoarse(samples_per_period));
        }
        if periods == 0 {
            return Err(FieldError::InvalidConfig("time grid needs at least one period".into()));
        }
        Ok(Self { periods, samples_per_period })
    }

    pub fn len(&self) -> usize {
        self.periods * self.samples_per_period
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self, omega: f64) -> Vec<f64> {
        let dt = std::f64::consts::TAU / (omega * self.samples_per_period as f64);
        (0..self.len()).map(|j| j as f64 * dt).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldState {
    Coherent { alpha: C64 },
    Number { n: u32 },
    Displaced { alpha: C64, n: u32, convention: Convention, normalize: bool },
}

impl FieldState {
    /// The `α` substituted into operator coefficients; `0` for number states.
    pub fn alpha(&self) -> C64 {
        match *self {
            FieldState::Coherent { alpha } | FieldState::Displaced { alpha, .. } => alpha,
            FieldState::Number { .. } => C64::from(0.0),
        }
    }

    pub fn excitation(&self) -> u32 {
        match *self {
            FieldState::Coherent { .. } => 0,
            FieldState::Number { n } | FieldState::Displaced { n, .. } => n,
        }
    }

    /// Fock dimension from the sizing rule, with room for the doubled space
    /// the displaced kets are cut from.
    pub fn default_space(&self) -> FockSpace {
        FockSpace::sized_for(self.alpha().norm(), self.excitation() as usize)
    }

    /// Closed form as a polynomial in `α` and phases, when one exists.
    pub fn symbolic(&self, x: &OperatorExpr) -> Result<TimeScalar, FieldError> {
        match *self {
            FieldState::Coherent { .. } => Ok(coherent_expectation(x)),
            FieldState::Displaced { n, convention, normalize, .. } => {
                Ok(displaced_state_expectation(x, n, convention, normalize)?)
            }
            FieldState::Number { n } => Ok(number_expectation(x, n)),
        }
    }

    /// The state vector used by the oracle, and the value `⟨ψ|ψ⟩` that
    /// expectations are divided by.
    pub fn ket(&self, space: FockSpace) -> Result<(Ket, f64), FieldError> {
        Ok(match *self {
            FieldState::Coherent { alpha } => (coherent_ket(alpha, space)?, 1.0),
            FieldState::Number { n } => (number_ket(n as usize, space)?, 1.0),
            FieldState::Displaced { alpha, n, convention: Convention::Adjoint, .. } => {
                (displaced_number_ket(alpha, n as usize, space)?, 1.0)
            }
            FieldState::Displaced { alpha, n, convention: Convention::Paper, normalize } => {
                let ket = paper_displaced_ket(alpha, n, space)?;
                let norm = if normalize { ket.norm().powi(2) } else { 1.0 };
                (ket, norm)
            }
        })
    }
}

/// `⟨n|(a†)^m a^{m'}|n⟩ = δ_{mm'} n!/(n−m)!`
fn number_expectation(x: &OperatorExpr, n: u32) -> TimeScalar {
    use crate::algebra::{CoeffPoly, RationalComplex};
    let mut out = TimeScalar::zero();
    for mono in x.monomials() {
        if mono.m != mono.n || mono.m > n {
            continue;
        }
        let falling: i64 = ((n - mono.m + 1)..=n).map(i64::from).product();
        let moment = CoeffPoly::constant(RationalComplex::integer(falling));
        out.add_bucket(mono.k, &(&mono.coeff * &moment));
    }
    out
}

/// `(a† − α)^n |α⟩ / √n!`, the state the printed calculation sandwiches with
/// `(a − α*)^n`. It is not normalised.
pub fn paper_displaced_ket(alpha: C64, n: u32, space: FockSpace) -> Result<Ket, FieldError> {
    let base = coherent_ket(alpha, space)?;
    let (_, ad) = ladder_matrices(space);
    let mut v = base.amplitudes().clone();
    let mut fact = 1.0;
    for j in 1..=n {
        v = ad.apply(&v) - &v * alpha;
        fact *= j as f64;
    }
    Ok(Ket::from_amplitudes(space, v / C64::from(fact.sqrt()), base.tail_mass())?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    /// Closed form where the state admits one, oracle otherwise.
    #[default]
    Auto,
    Symbolic,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSeries {
    pub t: Vec<f64>,
    pub values: Vec<C64>,
}

impl FieldSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn imag_rms(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        (self.values.iter().map(|v| v.im * v.im).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn max_diff(&self, other: &FieldSeries) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `t,re,im` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, v) in self.t.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{},{}", sig17(*t), sig17(v.re), sig17(v.im));
        }
        out
    }
}

/// Fixed 17-significant-digit scientific notation.
pub(crate) fn sig17(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// `⟨x⟩` split by phase tag, from one matrix per tag.
pub(crate) fn oracle_buckets(x: &OperatorExpr, ket: &Ket, norm: f64, alpha: C64) -> Result<Vec<(i32, C64)>, FieldError> {
    let mut ks: Vec<i32> = x.monomials().map(|m| m.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut buckets = Vec::with_capacity(ks.len());
    for k in ks {
        let part = OperatorExpr::from_monomials(x.monomials().filter(|m| m.k == k).map(|mut m| {
            m.k = 0;
            m
        }));
        let op = matrix_of(&part, ket.space(), 0.0, 1.0, alpha);
        buckets.push((k, expectation(&op, ket)? / norm));
    }
    Ok(buckets)
}

/// Samples `⟨x⟩(t)` on `grid`, by closed form or by the truncated oracle.
pub fn expectation_series(
    x: &OperatorExpr,
    state: &FieldState,
    cfg: &FieldConfig,
    grid: &TimeGrid,
    path: EvalPath,
    space: Option<FockSpace>,
) -> Result<FieldSeries, FieldError> {
    if grid.samples_per_period < 64 {
        return Err(FieldError::GridTooCoarse(grid.samples_per_period));
    }
    let t = grid.times(cfg.omega);
    let symbolic = match path {
        EvalPath::Symbolic => true,
        EvalPath::Oracle => false,
        EvalPath::Auto => !matches!(state, FieldState::Number { .. }),
    };
    let alpha = state.alpha();
    let values = if symbolic {
        let s = state.symbolic(x)?;
        t.iter().map(|&tt| s.eval(alpha, cfg.omega, tt)).collect()
    } else {
        let space = space.unwrap_or_else(|| state.default_space());
        let (ket, norm) = state.ket(space)?;
        let buckets = oracle_buckets(x, &ket, norm, alpha)?;
        t.iter()
            .map(|&tt| buckets.iter().map(|&(k, v)| v * C64::from_polar(1.0, k as f64 * cfg.omega * tt)).sum())
            .collect()
    };
    Ok(FieldSeries { t, values })
}
