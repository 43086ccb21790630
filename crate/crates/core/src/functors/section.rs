use super::FunctorError;
use crate::symplectic::{RationalVector, SymplecticSpace};
use crate::weyl::{CoeffExpr, NumericElement, WeylElement};

/// A continuous section `hbar -> sum_f c_f(hbar) W_hbar(f)` over `[0, 1]`,
/// with the coefficient functions kept symbolic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section(WeylElement);

impl Section {
    pub fn from_element(a: WeylElement) -> Self {
        Self(a)
    }

    /// `hbar -> W_hbar(f)`.
    pub fn from_generator(space: &SymplecticSpace, f: &RationalVector) -> Result<Self, FunctorError> {
        Ok(Self(WeylElement::generator(space, f)?))
    }

    /// `hbar -> Q_hbar(a)` for a classical element `a`.
    pub fn quantize(a: &WeylElement) -> Result<Self, FunctorError> {
        if !a.is_hbar_free() {
            return Err(FunctorError::NotInQuantizedImage);
        }
        Ok(Self(a.clone()))
    }

    pub fn zero(space: &SymplecticSpace) -> Self {
        Self(WeylElement::zero(space))
    }

    pub fn element(&self) -> &WeylElement {
        &self.0
    }

    pub fn space(&self) -> &SymplecticSpace {
        self.0.space()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FunctorError> {
        Ok(Self(self.0.multiply(&other.0)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self, FunctorError> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FunctorError> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    /// Pointwise multiplication by the scalar function `c(hbar)`.
    pub fn scale(&self, c: &CoeffExpr) -> Self {
        Self(self.0.scale(c))
    }

    pub fn involution(&self) -> Self {
        Self(self.0.involution())
    }

    pub fn evaluate_at(&self, hbar: f64) -> NumericElement {
        self.0.evaluate_at(hbar)
    }

    /// Membership in `K_0`, the sections whose fiber norms vanish as
    /// `hbar -> 0`. Since `max |c_f(0)| <= lim ||phi_hbar(s)|| <= sum |c_f(0)|`,
    /// this holds iff every coefficient is exactly zero at `hbar = 0`.
    pub fn k0_membership(&self) -> bool {
        self.0.terms().all(|(_, c)| c.eval_at_zero().is_zero())
    }

    /// Image in `A / K_0`, realized as evaluation at `hbar = 0`.
    pub fn quotient(&self) -> WeylElement {
        self.0.evaluate_at_zero()
    }
}
