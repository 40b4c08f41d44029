//! Polynomials in the displacement symbol α and its conjugate α*.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use num_traits::Zero;

use super::rational::RationalComplex;

/// `Σ c_pq · α^p · (α*)^q` with exact coefficients.
///
/// Keys are `(p, q)`. Zero coefficients are never stored, so structural
/// equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<(u32, u32), RationalComplex>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RationalComplex) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(RationalComplex::integer(1))
    }

    /// `c · α^p · (α*)^q`
    pub fn monomial(c: RationalComplex, p: u32, q: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(p, q, c);
        out
    }

    pub fn alpha() -> Self {
        Self::monomial(RationalComplex::integer(1), 1, 0)
    }

    pub fn alpha_conj() -> Self {
        Self::monomial(RationalComplex::integer(1), 0, 1)
    }

    /// `|α|² = α·α*`
    pub fn alpha_norm_sqr() -> Self {
        Self::monomial(RationalComplex::integer(1), 1, 1)
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: RationalComplex) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, q)).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &RationalComplex)> {
        self.terms.iter().map(|(&(p, q), c)| (p, q, c))
    }

    pub fn coefficient(&self, p: u32, q: u32) -> RationalComplex {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// The value if the polynomial has no α dependence.
    pub fn as_constant(&self) -> Option<RationalComplex> {
        match self.terms.len() {
            0 => Some(RationalComplex::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Swaps `p ↔ q` and conjugates every coefficient.
    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(p, q), c)| ((q, p), c.conj())).collect(),
        }
    }

    pub fn scale(&self, c: &RationalComplex) -> Self {
        let mut out = Self::zero();
        for (&(p, q), v) in &self.terms {
            out.add_term(p, q, v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, alpha: C64) -> C64 {
        let ac = alpha.conj();
        self.terms
            .iter()
            .map(|(&(p, q), c)| c.to_c64() * alpha.powu(p) * ac.powu(q))
            .sum()
    }
}

impl<'a> Add<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, -c);
        }
        out
    }
}

impl<'a> Mul<&'a CoeffPoly> for &'a CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (&(p1, q1), c1) in &self.terms {
            for (&(p2, q2), c2) in &rhs.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(p, q), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            match p {
                0 => {}
                1 => write!(f, "·α")?,
                _ => write!(f, "·α^{p}")?,
            }
            match q {
                0 => {}
                1 => write!(f, "·α*")?,
                _ => write!(f, "·α*^{q}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = CoeffPoly::alpha();
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn conj_swaps_powers() {
        let p = CoeffPoly::monomial(RationalComplex::from_ints(2, 3), 3, 1);
        let c = p.conj();
        assert_eq!(c.coefficient(1, 3), RationalComplex::from_ints(2, -3));
        assert_eq!(c.conj(), p);
    }

    #[test]
    fn constant_detection() {
        assert!(CoeffPoly::alpha().as_constant().is_none());
        assert_eq!(CoeffPoly::one().as_constant(), Some(RationalComplex::integer(1)));
        assert_eq!(CoeffPoly::zero().as_constant(), Some(RationalComplex::zero()));
    }

    #[test]
    fn binomial_square() {
        let s = &CoeffPoly::alpha() + &CoeffPoly::alpha_conj();
        let sq = s.pow(2);
        assert_eq!(sq.coefficient(2, 0), RationalComplex::integer(1));
        assert_eq!(sq.coefficient(1, 1), RationalComplex::integer(2));
        assert_eq!(sq.coefficient(0, 2), RationalComplex::integer(1));
        let v = sq.eval(C64::new(0.3, -0.2));
        assert!((v - C64::new(0.36, 0.0)).norm() < 1e-15);
    }
}
