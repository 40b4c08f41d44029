//! Exact time signals `Σ_k P_k(α, α*) e^{ikωt}` and the expectation functionals
//! that produce them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_traits::{One, Zero};

use super::coeff::CoeffPoly;
use super::expr::{multiply, shifted_power, Atom, Convention, OperatorExpr};
use super::rational::RationalComplex;
use super::AlgebraError;

/// Largest excitation accepted by [`displaced_state_expectation`]. Term counts
/// grow factorially with `n`.
pub const DEFAULT_MAX_EXCITATION: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TimeScalar {
    terms: BTreeMap<i32, CoeffPoly>,
}

impl TimeScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_buckets<I: IntoIterator<Item = (i32, CoeffPoly)>>(buckets: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in buckets {
            out.add_bucket(k, &c);
        }
        out
    }

    pub fn add_bucket(&mut self, k: i32, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn bucket(&self, k: i32) -> CoeffPoly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn buckets(&self) -> impl Iterator<Item = (i32, &CoeffPoly)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_bucket(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_bucket(k, &-c);
        }
        out
    }

    pub fn scale(&self, c: &RationalComplex) -> Self {
        let c = CoeffPoly::constant(c.clone());
        Self::from_buckets(self.terms.iter().map(|(&k, v)| (k, v * &c)))
    }

    /// Complex conjugate as a signal: conjugated coefficients, negated phases.
    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.conj())).collect(),
        }
    }

    /// Exact symbolic reality: `P_{−k} = conj(P_k)` for every `k`.
    pub fn is_real_signal(&self) -> bool {
        *self == self.conj()
    }

    pub fn eval(&self, alpha: C64, omega: f64, t: f64) -> C64 {
        self.terms
            .iter()
            .map(|(&k, c)| c.eval(alpha) * C64::from_polar(1.0, k as f64 * omega * t))
            .sum()
    }

    /// Every bucket evaluated at a numeric α.
    pub fn numeric_buckets(&self, alpha: C64) -> BTreeMap<i32, C64> {
        self.terms.iter().map(|(&k, c)| (k, c.eval(alpha))).collect()
    }

    /// RMS over one period of `Im s(t)` at numeric α, by Parseval.
    pub fn imaginary_residual(&self, alpha: C64) -> f64 {
        let vals = self.numeric_buckets(alpha);
        let mut keys: Vec<i32> = vals.keys().flat_map(|&k| [k, -k]).collect();
        keys.sort_unstable();
        keys.dedup();
        let get = |k: i32| vals.get(&k).copied().unwrap_or_default();
        keys.iter()
            .map(|&k| ((get(k) - get(-k).conj()) * 0.5).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Display for TimeScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "[{c}]")?;
            } else {
                write!(f, "[{c}]·e^({k}iωt)")?;
            }
        }
        Ok(())
    }
}

/// `⟨α|x|α⟩`, using `⟨α|(a†)^m a^n|α⟩ = (α*)^m α^n`.
pub fn coherent_expectation(x: &OperatorExpr) -> TimeScalar {
    let mut out = TimeScalar::zero();
    for (m, n, k, c) in x.terms() {
        let moment = CoeffPoly::monomial(RationalComplex::integer(1), n, m);
        out.add_bucket(k, &(c * &moment));
    }
    out
}

/// The two shifted-operator strings bracketing `x` for the `n`-th displaced state:
/// `(bra_string, ket_string)` with `⟨α|bra · x · ket|α⟩`.
pub fn shifted_strings(n: u32, conv: Convention) -> (OperatorExpr, OperatorExpr) {
    let (bra_shift, ket_shift) = match conv {
        Convention::Paper => (CoeffPoly::alpha_conj(), CoeffPoly::alpha()),
        Convention::Adjoint => (CoeffPoly::alpha(), CoeffPoly::alpha_conj()),
    };
    (
        shifted_power(Atom::Annihilate, &bra_shift, n),
        shifted_power(Atom::Create, &ket_shift, n),
    )
}

/// Unnormalised sandwich `⟨α|bra · x · ket|α⟩` together with the symbolic
/// norm `⟨α|bra · ket|α⟩` of the state it represents.
pub fn displaced_sandwich(x: &OperatorExpr, n: u32, conv: Convention) -> (TimeScalar, CoeffPoly) {
    let (bra, ket) = shifted_strings(n, conv);
    let numerator = coherent_expectation(&multiply(&multiply(&bra, x), &ket));
    let norm = coherent_expectation(&multiply(&bra, &ket)).bucket(0);
    (numerator, norm)
}

/// `⟨α_n|x|α_n⟩` for the state built from `n` shifted creation operators on `|α⟩`.
///
/// With `normalize == false` the sandwich is divided by `n!` only. With
/// `normalize == true` it is divided by the exact symbolic norm, which must be a
/// constant for the result to stay polynomial.
pub fn displaced_state_expectation(
    x: &OperatorExpr,
    n: u32,
    conv: Convention,
    normalize: bool,
) -> Result<TimeScalar, AlgebraError> {
    displaced_state_expectation_bounded(x, n, conv, normalize, DEFAULT_MAX_EXCITATION)
}

pub fn displaced_state_expectation_bounded(
    x: &OperatorExpr,
    n: u32,
    conv: Convention,
    normalize: bool,
    max_n: u32,
) -> Result<TimeScalar, AlgebraError> {
    if n > max_n {
        return Err(AlgebraError::ExcitationTooHigh { n, max: max_n });
    }
    let (numerator, norm) = displaced_sandwich(x, n, conv);
    let divisor = if normalize {
        match norm.as_constant() {
            Some(c) if !c.is_zero() => c,
            _ => return Err(AlgebraError::NonConstantNorm { norm: norm.to_string() }),
        }
    } else {
        RationalComplex::from_bigint((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
    };
    Ok(numerator.scale(&(&RationalComplex::integer(1) / &divisor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::{adjoint, atom};

    fn a() -> OperatorExpr {
        atom(Atom::Annihilate)
    }
    fn ad() -> OperatorExpr {
        atom(Atom::Create)
    }
    fn poly(entries: &[(u32, u32, i64)]) -> CoeffPoly {
        let mut p = CoeffPoly::zero();
        for &(pp, q, c) in entries {
            p.add_term(pp, q, RationalComplex::integer(c));
        }
        p
    }
    fn static_scalar(p: CoeffPoly) -> TimeScalar {
        TimeScalar::from_buckets([(0, p)])
    }

    #[test]
    fn coherent_moments() {
        assert_eq!(coherent_expectation(&a()), static_scalar(CoeffPoly::alpha()));
        assert_eq!(coherent_expectation(&multiply(&a(), &ad())), static_scalar(poly(&[(0, 0, 1), (1, 1, 1)])));
        // 2α* + α*|α|²
        let aadad = multiply(&a(), &multiply(&ad(), &ad()));
        assert_eq!(coherent_expectation(&aadad), static_scalar(poly(&[(0, 1, 2), (1, 2, 1)])));
    }

    #[test]
    fn printed_first_excited_sandwiches() {
        // 2α*(1+|α|²) − α*³ − α(1+|α|²)
        let j = poly(&[(0, 1, 2), (1, 2, 2), (0, 3, -1), (1, 0, -1), (2, 1, -1)]);
        // 2α(1+|α|²) − α³ − α*(1+|α|²)
        let k = poly(&[(1, 0, 2), (2, 1, 2), (3, 0, -1), (0, 1, -1), (1, 2, -1)]);
        let got_j = displaced_state_expectation(&ad(), 1, Convention::Paper, false).unwrap();
        let got_k = displaced_state_expectation(&a(), 1, Convention::Paper, false).unwrap();
        assert_eq!(got_j, static_scalar(j.clone()));
        assert_eq!(got_k, static_scalar(k.clone()));
        assert_eq!(j.conj(), k);
    }

    #[test]
    fn adjoint_convention_mean_field_is_alpha() {
        for n in 0..=4 {
            let got = displaced_state_expectation(&a(), n, Convention::Adjoint, true).unwrap();
            assert_eq!(got, static_scalar(CoeffPoly::alpha()), "n = {n}");
        }
    }

    #[test]
    fn adjoint_norm_is_factorial() {
        for (n, f) in [(0, 1), (1, 1), (2, 2), (3, 6), (4, 24)] {
            let (_, norm) = displaced_sandwich(&OperatorExpr::identity(), n, Convention::Adjoint);
            assert_eq!(norm, CoeffPoly::constant(RationalComplex::integer(f)));
        }
    }

    #[test]
    fn paper_norm_is_not_constant() {
        let (_, norm) = displaced_sandwich(&OperatorExpr::identity(), 1, Convention::Paper);
        // 1 + 2|α|² − α² − α*²
        assert_eq!(norm, poly(&[(0, 0, 1), (1, 1, 2), (2, 0, -1), (0, 2, -1)]));
        let err = displaced_state_expectation(&a(), 1, Convention::Paper, true).unwrap_err();
        assert!(matches!(err, AlgebraError::NonConstantNorm { .. }));
    }

    #[test]
    fn ground_state_reduces_to_coherent() {
        let x = multiply(&a(), &multiply(&ad(), &ad()));
        for conv in [Convention::Paper, Convention::Adjoint] {
            for norm in [false, true] {
                assert_eq!(displaced_state_expectation(&x, 0, conv, norm).unwrap(), coherent_expectation(&x));
            }
        }
    }

    #[test]
    fn excitation_limit() {
        let err = displaced_state_expectation(&a(), 7, Convention::Adjoint, true).unwrap_err();
        assert!(matches!(err, AlgebraError::ExcitationTooHigh { n: 7, max: 6 }));
        assert!(displaced_state_expectation_bounded(&a(), 7, Convention::Adjoint, true, 7).is_ok());
    }

    #[test]
    fn adjoint_conjugates_expectation() {
        let x = multiply(&a(), &multiply(&ad(), &ad())).scale(&CoeffPoly::alpha());
        assert_eq!(coherent_expectation(&adjoint(&x)), coherent_expectation(&x).conj());
    }

    #[test]
    fn imaginary_residual_of_real_signal_vanishes() {
        let s = TimeScalar::from_buckets([(-1, CoeffPoly::alpha()), (1, CoeffPoly::alpha_conj())]);
        assert!(s.is_real_signal());
        assert!(s.imaginary_residual(C64::new(0.4, -1.3)) < 1e-15);
        let t = TimeScalar::from_buckets([(0, CoeffPoly::alpha())]);
        assert!(!t.is_real_signal());
        assert!((t.imaginary_residual(C64::new(0.0, 2.0)) - 2.0).abs() < 1e-15);
    }
}
