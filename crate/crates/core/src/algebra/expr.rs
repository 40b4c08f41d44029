//! Normal-ordered operator polynomials in `a`, `a†` with Heisenberg phase tags.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::coeff::CoeffPoly;
use super::rational::RationalComplex;
use super::AlgebraError;

/// Which pair of shifted ladder operators a displacement produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `a → a − α`, `a† → a† − α`; bra-side annihilators in a sandwich shift by `α*`.
    Paper,
    /// `a → a − α`, `a† → a† − α*`, so the pair stays mutually adjoint.
    Adjoint,
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Adjoint => "adjoint",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Annihilate,
    Create,
    Identity,
}

/// `coeff · (a†)^m · a^n · e^{ikωt}`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalMonomial {
    pub coeff: CoeffPoly,
    pub m: u32,
    pub n: u32,
    pub k: i32,
}

/// Canonical sum of normal-ordered monomials, keyed and sorted by `(m, n, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<(u32, u32, i32), CoeffPoly>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        atom(Atom::Identity)
    }

    pub fn annihilate() -> Self {
        atom(Atom::Annihilate)
    }

    pub fn create() -> Self {
        atom(Atom::Create)
    }

    pub fn monomial(coeff: CoeffPoly, m: u32, n: u32, k: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(m, n, k, &coeff);
        out
    }

    /// Canonical sum of arbitrary monomials; like terms merge.
    pub fn from_monomials<I: IntoIterator<Item = NormalMonomial>>(monos: I) -> Self {
        let mut out = Self::zero();
        for mono in monos {
            out.add_term(mono.m, mono.n, mono.k, &mono.coeff);
        }
        out
    }

    /// A c-number term `c · e^{ikωt}`.
    pub fn scalar(coeff: CoeffPoly, k: i32) -> Self {
        Self::monomial(coeff, 0, 0, k)
    }

    fn add_term(&mut self, m: u32, n: u32, k: i32, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((m, n, k)).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&(m, n, k));
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

    /// Monomials in canonical `(m, n, k)` order.
    pub fn monomials(&self) -> impl Iterator<Item = NormalMonomial> + '_ {
        self.terms.iter().map(|(&(m, n, k), c)| NormalMonomial { coeff: c.clone(), m, n, k })
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (u32, u32, i32, &CoeffPoly)> {
        self.terms.iter().map(|(&(m, n, k), c)| (m, n, k, c))
    }

    pub fn coefficient(&self, m: u32, n: u32, k: i32) -> CoeffPoly {
        self.terms.get(&(m, n, k)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &CoeffPoly) -> Self {
        let mut out = Self::zero();
        for (&(m, n, k), v) in &self.terms {
            out.add_term(m, n, k, &(v * c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n, k), c) in &other.terms {
            out.add_term(m, n, k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n, k), c) in &other.terms {
            out.add_term(m, n, k, &-c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        multiply(self, other)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::identity();
        for _ in 0..e {
            out = multiply(&out, self);
        }
        out
    }

    pub fn max_phase(&self) -> i32 {
        self.terms.keys().map(|&(_, _, k)| k.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(m, n, k), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]")?;
            if m > 0 {
                write!(f, "·a†^{m}")?;
            }
            if n > 0 {
                write!(f, "·a^{n}")?;
            }
            if k != 0 {
                write!(f, "·e^({k}iωt)")?;
            }
        }
        Ok(())
    }
}

pub fn atom(kind: Atom) -> OperatorExpr {
    let (m, n) = match kind {
        Atom::Annihilate => (0, 1),
        Atom::Create => (1, 0),
        Atom::Identity => (0, 0),
    };
    OperatorExpr::monomial(CoeffPoly::one(), m, n, 0)
}

pub fn combine<'a, I>(xs: I) -> OperatorExpr
where
    I: IntoIterator<Item = (RationalComplex, &'a OperatorExpr)>,
{
    let mut out = OperatorExpr::zero();
    for (c, x) in xs {
        let c = CoeffPoly::constant(c);
        for (&(m, n, k), v) in &x.terms {
            out.add_term(m, n, k, &(v * &c));
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Normal-ordered product.
///
/// Uses `a^n (a†)^m = Σ_j C(n,j) C(m,j) j! (a†)^{m−j} a^{n−j}`, the closed
/// form of repeatedly rewriting `a a† → a† a + 1`.
pub fn multiply(x: &OperatorExpr, y: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (&(m1, n1, k1), c1) in &x.terms {
        for (&(m2, n2, k2), c2) in &y.terms {
            let c = c1 * c2;
            for j in 0..=n1.min(m2) {
                let weight = binomial(n1, j) * binomial(m2, j) * factorial(j);
                let term = c.scale(&RationalComplex::from_bigint(weight));
                out.add_term(m1 + m2 - j, n1 + n2 - j, k1 + k2, &term);
            }
        }
    }
    out
}

/// Juxtaposed product `:x y:` with every `a†` moved left and no contraction
/// terms.
pub fn normal_product(x: &OperatorExpr, y: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (&(m1, n1, k1), c1) in &x.terms {
        for (&(m2, n2, k2), c2) in &y.terms {
            out.add_term(m1 + m2, n1 + n2, k1 + k2, &(c1 * c2));
        }
    }
    out
}

/// Hermitian adjoint. `((a†)^m a^n)† = (a†)^n a^m`, which is already normal.
pub fn adjoint(x: &OperatorExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (&(m, n, k), c) in &x.terms {
        out.add_term(n, m, -k, &c.conj());
    }
    out
}

/// Substitutes the shifted ladder operators with shift `α`.
pub fn displace_subst(x: &OperatorExpr, conv: Convention) -> OperatorExpr {
    displace_by(x, &CoeffPoly::alpha(), conv)
}

/// `a → a − s` and `a† → a† − s` (paper) or `a† − s*` (adjoint).
pub fn displace_by(x: &OperatorExpr, shift: &CoeffPoly, conv: Convention) -> OperatorExpr {
    let create_shift = match conv {
        Convention::Paper => shift.clone(),
        Convention::Adjoint => shift.conj(),
    };
    let neg_a = -shift;
    let neg_c = -&create_shift;
    let mut out = OperatorExpr::zero();
    for (&(m, n, k), c) in &x.terms {
        // (a† − t)^m (a − s)^n is already normal ordered once expanded
        for i in 0..=m {
            let ci = neg_c.pow(m - i).scale(&RationalComplex::from_bigint(binomial(m, i)));
            for j in 0..=n {
                let cj = neg_a.pow(n - j).scale(&RationalComplex::from_bigint(binomial(n, j)));
                out.add_term(i, j, k, &(&(c * &ci) * &cj));
            }
        }
    }
    out
}

/// Heisenberg evolution under `ω(a†a + ½)`: `(a†)^m a^n → (a†)^m a^n e^{i(m−n)ωt}`.
pub fn evolve_phases(x: &OperatorExpr) -> Result<OperatorExpr, AlgebraError> {
    let mut out = OperatorExpr::zero();
    for (&(m, n, k), c) in &x.terms {
        if k != 0 {
            return Err(AlgebraError::AlreadyEvolved { m, n, k });
        }
        out.add_term(m, n, m as i32 - n as i32, c);
    }
    Ok(out)
}

/// `(ladder − shift)^power`
pub(crate) fn shifted_power(atom_kind: Atom, shift: &CoeffPoly, power: u32) -> OperatorExpr {
    let base = atom(atom_kind).sub(&OperatorExpr::scalar(shift.clone(), 0));
    base.pow(power)
}
