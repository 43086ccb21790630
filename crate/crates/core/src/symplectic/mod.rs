//! Finite-dimensional rational symplectic vector spaces, characters of the
//! additive group, and linear maps between spaces.
//!
//! Everything here is exact. Vectors live in `Q^dim`, the form is an
//! antisymmetric nondegenerate rational matrix, and characters are restricted
//! to the family `f -> exp(i*pi*<theta, f>)` with rational `theta`, so every
//! character value is a root of unity.

mod matrix;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{
    format_rational, int, parse_rational, rat, rational_to_f64, rem_euclid, Rational,
    RationalMatrix, RationalVector,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymplecticError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("form is not antisymmetric")]
    NotAntisymmetric,
    #[error("form is degenerate")]
    Degenerate,
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A rational vector space `Q^dim` carrying a symplectic form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    form: RationalMatrix,
}

impl SymplecticSpace {
    /// Validates antisymmetry and nondegeneracy of `form`.
    pub fn new(form: RationalMatrix) -> Result<Self, SymplecticError> {
        if form.rows() != form.cols() || form.rows() == 0 || form.rows() % 2 != 0 {
            return Err(SymplecticError::Shape(format!(
                "symplectic form must be square of positive even size, got {}x{}",
                form.rows(),
                form.cols()
            )));
        }
        if !form.is_antisymmetric() {
            return Err(SymplecticError::NotAntisymmetric);
        }
        if form.determinant()?.is_zero() {
            return Err(SymplecticError::Degenerate);
        }
        Ok(Self { form })
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    pub fn form(&self) -> &RationalMatrix {
        &self.form
    }

    pub fn check_vector(&self, v: &RationalVector) -> Result<(), SymplecticError> {
        if v.len() != self.dim() {
            return Err(SymplecticError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn zero_vector(&self) -> RationalVector {
        RationalVector::zeros(self.dim())
    }
}

impl fmt::Debug for SymplecticSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymplecticSpace(dim={}, form={:?})", self.dim(), self.form)
    }
}

/// Canonical form `J = [[0, I], [-I, 0]]` on `Q^{2n}`.
pub fn standard_form(n: usize) -> RationalMatrix {
    let mut j = RationalMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, Rational::one());
        j.set(n + i, i, -Rational::one());
    }
    j
}

pub fn standard_space(n: usize) -> SymplecticSpace {
    assert!(n >= 1, "standard_space needs n >= 1");
    SymplecticSpace {
        form: standard_form(n),
    }
}

/// `f^T * form * g`.
pub fn symplectic_form(
    space: &SymplecticSpace,
    f: &RationalVector,
    g: &RationalVector,
) -> Result<Rational, SymplecticError> {
    space.check_vector(f)?;
    space.check_vector(g)?;
    let jg = space.form.mul_vec(g)?;
    Ok(f.dot(&jg))
}

/// A linear (equivalently, over Q, additive) map given by its matrix.
/// Columns index the domain, rows the codomain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearMapSpec {
    matrix: RationalMatrix,
}

impl LinearMapSpec {
    pub fn new(matrix: RationalMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(RationalMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, f: &RationalVector) -> Result<RationalVector, SymplecticError> {
        self.matrix.mul_vec(f)
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &LinearMapSpec) -> Result<LinearMapSpec, SymplecticError> {
        Ok(Self::new(self.matrix.mul(&inner.matrix)?))
    }
}

impl fmt::Debug for LinearMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

/// True iff `T^T * form_cod * T == form_dom` exactly.
pub fn is_symplectic_map(
    t: &LinearMapSpec,
    dom: &SymplecticSpace,
    cod: &SymplecticSpace,
) -> Result<bool, SymplecticError> {
    if t.domain_dim() != dom.dim() || t.codomain_dim() != cod.dim() {
        return Err(SymplecticError::Shape(format!(
            "map is {}x{} but spaces have dims {} -> {}",
            t.codomain_dim(),
            t.domain_dim(),
            dom.dim(),
            cod.dim()
        )));
    }
    let pulled = t.matrix.transpose().mul(&cod.form)?.mul(&t.matrix)?;
    Ok(pulled == dom.form)
}

/// A root of unity `exp(i*pi*r)` stored by its exponent `r` reduced into `[0, 2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PhaseScalar {
    exponent: Rational,
}

impl PhaseScalar {
    pub fn from_exponent(r: Rational) -> Self {
        Self {
            exponent: rem_euclid(&r, &int(2)),
        }
    }

    pub fn one() -> Self {
        Self::from_exponent(Rational::zero())
    }

    /// The exponent `r` of `exp(i*pi*r)`, in `[0, 2)`.
    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_exponent(&self.exponent + &other.exponent)
    }

    pub fn conj(&self) -> Self {
        Self::from_exponent(-&self.exponent)
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero()
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let angle = std::f64::consts::PI * rational_to_f64(&self.exponent);
        num_complex::Complex64::from_polar(1.0, angle)
    }
}

impl fmt::Debug for PhaseScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(i*pi*{})", self.exponent)
    }
}

/// The character `f -> exp(i*pi*<theta, f>)` on the additive group of the space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharacterSpec {
    theta: RationalVector,
}

impl CharacterSpec {
    pub fn new(theta: RationalVector) -> Self {
        Self { theta }
    }

    pub fn trivial(dim: usize) -> Self {
        Self::new(RationalVector::zeros(dim))
    }

    pub fn theta(&self) -> &RationalVector {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.theta.is_zero()
    }

    /// Character of `f -> chi(T f)`, i.e. `theta' = T^T theta`.
    pub fn pull_back(&self, t: &LinearMapSpec) -> Result<CharacterSpec, SymplecticError> {
        Ok(Self::new(t.matrix().transpose().mul_vec(&self.theta)?))
    }

    /// Pointwise product of characters.
    pub fn product(&self, other: &CharacterSpec) -> CharacterSpec {
        Self::new(&self.theta + &other.theta)
    }
}

impl fmt::Debug for CharacterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi{:?}", self.theta)
    }
}

pub fn character_eval(
    chi: &CharacterSpec,
    f: &RationalVector,
) -> Result<PhaseScalar, SymplecticError> {
    if chi.dim() != f.len() {
        return Err(SymplecticError::DimensionMismatch {
            expected: chi.dim(),
            found: f.len(),
        });
    }
    Ok(PhaseScalar::from_exponent(chi.theta.dot(f)))
}

/// JSON literal for a space: either `{"standard": n}` or `{"form": [["0","1"],["-1","0"]]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SpaceLiteral {
    Standard { standard: usize },
    Form { form: Vec<Vec<String>> },
}

impl SpaceLiteral {
    pub fn build(&self) -> Result<SymplecticSpace, SymplecticError> {
        match self {
            SpaceLiteral::Standard { standard } => {
                if *standard == 0 {
                    return Err(SymplecticError::Shape("standard space needs n >= 1".into()));
                }
                Ok(standard_space(*standard))
            }
            SpaceLiteral::Form { form } => SymplecticSpace::new(parse_matrix(form)?),
        }
    }

    pub fn from_space(space: &SymplecticSpace) -> Self {
        SpaceLiteral::Form {
            form: format_matrix(space.form()),
        }
    }
}

pub fn parse_vector(entries: &[String]) -> Result<RationalVector, SymplecticError> {
    Ok(RationalVector::new(
        entries
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<_, _>>()?,
    ))
}

pub fn format_vector(v: &RationalVector) -> Vec<String> {
    v.entries().iter().map(format_rational).collect()
}

pub fn parse_matrix(rows: &[Vec<String>]) -> Result<RationalMatrix, SymplecticError> {
    RationalMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect::<Result<_, _>>()?,
    )
}

pub fn format_matrix(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}
