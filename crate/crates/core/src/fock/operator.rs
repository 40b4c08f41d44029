use nalgebra::{DMatrix, DVector};

use super::{expm, FockError, FockSpace};
use crate::algebra::{Convention, OperatorExpr};
use crate::C64;

/// Dense operator on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    mat: DMatrix<C64>,
}

impl FockOperator {
    pub fn from_matrix(space: FockSpace, mat: DMatrix<C64>) -> Result<Self, FockError> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(FockError::DimensionMismatch { left: space.dim(), right: mat.nrows() });
        }
        Ok(Self { space, mat })
    }

    pub fn identity(space: FockSpace) -> Self {
        Self { space, mat: DMatrix::identity(space.dim(), space.dim()) }
    }

    pub fn zeros(space: FockSpace) -> Self {
        Self { space, mat: DMatrix::zeros(space.dim(), space.dim()) }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Self { space: self.space, mat: self.mat.adjoint() }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self, FockError> {
        self.space.check(&rhs.space)?;
        Ok(Self { space: self.space, mat: &self.mat * &rhs.mat })
    }

    pub fn plus(&self, rhs: &Self) -> Result<Self, FockError> {
        self.space.check(&rhs.space)?;
        Ok(Self { space: self.space, mat: &self.mat + &rhs.mat })
    }

    pub fn minus(&self, rhs: &Self) -> Result<Self, FockError> {
        self.space.check(&rhs.space)?;
        Ok(Self { space: self.space, mat: &self.mat - &rhs.mat })
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { space: self.space, mat: &self.mat * c }
    }

    /// `self·rhs − rhs·self`
    pub fn commutator(&self, rhs: &Self) -> Result<Self, FockError> {
        self.compose(rhs)?.minus(&rhs.compose(self)?)
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }

    /// Frobenius norm of `self − self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).norm()
    }

    /// Upper-left `size × size` block.
    pub fn leading_block(&self, size: usize) -> DMatrix<C64> {
        self.mat.view((0, 0), (size, size)).into_owned()
    }

    /// Eigenvalues, ascending. Only meaningful for Hermitian operators.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()) * C64::from(0.5);
        let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }
}

/// `(a, a†)` with `a[i−1, i] = √i`.
pub fn ladder_matrices(space: FockSpace) -> (FockOperator, FockOperator) {
    let d = space.dim();
    let mut a = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        a[(i - 1, i)] = C64::from((i as f64).sqrt());
    }
    let ad = a.adjoint();
    (FockOperator { space, mat: a }, FockOperator { space, mat: ad })
}

/// `D(α) = exp(α a† − α* a)`.
pub fn displacement_matrix(alpha: C64, space: FockSpace) -> FockOperator {
    let (a, ad) = ladder_matrices(space);
    let generator = ad.mat * alpha - a.mat * alpha.conj();
    FockOperator { space, mat: expm(&generator) }
}

/// `(a†)^m a^n` on the truncated space, entries from exact integer products.
fn normal_word(space: FockSpace, m: u32, n: u32) -> DMatrix<C64> {
    let d = space.dim();
    let (m, n) = (m as usize, n as usize);
    let mut out = DMatrix::<C64>::zeros(d, d);
    for j in n..d {
        let mid = j - n;
        let target = mid + m;
        if target >= d {
            continue;
        }
        let lower: f64 = (mid + 1..=j).map(|v| v as f64).product();
        let upper: f64 = (mid + 1..=target).map(|v| v as f64).product();
        out[(target, j)] = C64::from((lower * upper).sqrt());
    }
    out
}

/// Numeric matrix of `x` at time `t`, with `α` substituted into the coefficients.
pub fn matrix_of(x: &OperatorExpr, space: FockSpace, t: f64, omega: f64, alpha: C64) -> FockOperator {
    let d = space.dim();
    let mut mat = DMatrix::<C64>::zeros(d, d);
    for mono in x.monomials() {
        let c = mono.coeff.eval(alpha) * C64::from_polar(1.0, mono.k as f64 * omega * t);
        mat += normal_word(space, mono.m, mono.n) * c;
    }
    FockOperator { space, mat }
}

pub struct Hamiltonians {
    /// `ω(a†a + ½)`
    pub h: FockOperator,
    /// `ω(a†_α a_α + ½)` under the requested convention.
    pub h_alpha: FockOperator,
    pub h_alpha_hermitian: bool,
    pub hermiticity_defect: f64,
}

pub fn hamiltonians(omega: f64, alpha: C64, space: FockSpace, conv: Convention) -> Hamiltonians {
    let (a, ad) = ladder_matrices(space);
    let id = DMatrix::<C64>::identity(space.dim(), space.dim());
    let number = &ad.mat * &a.mat;
    let h = (&number + &id * C64::from(0.5)) * C64::from(omega);
    let create_shift = match conv {
        Convention::Paper => alpha,
        Convention::Adjoint => alpha.conj(),
    };
    let shifted_a = &a.mat - &id * alpha;
    let shifted_ad = &ad.mat - &id * create_shift;
    let h_alpha = (shifted_ad * shifted_a + &id * C64::from(0.5)) * C64::from(omega);
    let h_alpha = FockOperator { space, mat: h_alpha };
    let defect = h_alpha.hermiticity_defect();
    let scale = h_alpha.mat.norm().max(1.0);
    Hamiltonians {
        h: FockOperator { space, mat: h },
        h_alpha_hermitian: defect <= 1e-12 * scale,
        hermiticity_defect: defect,
        h_alpha,
    }
}
