//! Quantization and classical-limit functors for Weyl algebras.

mod categories;
mod conditions;
mod morphism;
mod section;

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::symplectic::{int, rat, rational_to_f64, Rational, SymplecticError, SymplecticSpace};
use crate::weyl::WeylError;

pub use categories::{
    element_eta, element_phi, ClassicalLimitFunctor, EtaTransformation, LinClass, LinQuant,
    PhiTransformation, QuantizationFunctor,
};
pub use conditions::{
    dirac_defect, dirac_defect_elements, rieffel_condition_check, von_neumann_defect,
    von_neumann_defect_elements,
};
pub use morphism::{
    poisson_morphism_check, quantize_morphism, classical_limit_morphism, rescale, scaling_check,
    smooth_check, smooth_check_images, Fiber, WeylMorphismSpec,
};
pub use section::Section;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctorError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error("map is not symplectic between the given spaces")]
    NotSymplectic,
    #[error("morphism does not preserve Poisson brackets")]
    NotPoisson,
    #[error("morphism fails the scaling or smoothness condition")]
    NotScaling,
    #[error("element is not in the image of the quantization map")]
    NotInQuantizedImage,
    #[error("morphism lives in the {0:?} fiber")]
    WrongFiber(Fiber),
    #[error("hbar must be positive here")]
    ZeroHbar,
    #[error("hbar must lie in (0, 1]")]
    HbarOutOfRange,
}

/// A point of the base space `{0} U (0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum HbarValue {
    Zero,
    Positive(Rational),
}

impl HbarValue {
    pub fn new(r: Rational) -> Result<Self, FunctorError> {
        if r.is_zero() {
            Ok(Self::Zero)
        } else if r.is_positive() && r <= Rational::one() {
            Ok(Self::Positive(r))
        } else {
            Err(FunctorError::HbarOutOfRange)
        }
    }

    pub fn one() -> Self {
        Self::Positive(int(1))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Positive(r) => rational_to_f64(r),
        }
    }
}

impl fmt::Debug for HbarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::Positive(r) => write!(f, "{r}"),
        }
    }
}

/// `{1, 1/2, 1/4, 1/8, 1/16, 1/32}`.
pub fn default_schedule() -> Vec<HbarValue> {
    (0..6).map(|k| HbarValue::Positive(rat(1, 1 << k))).collect()
}

/// An object `(AP(V'), Delta(V, 0))` of the classical category.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassicalWeylObject {
    pub space: SymplecticSpace,
}

/// An object `(W(V, hbar sigma), Delta(V, hbar sigma), Q_hbar)` of the quantum category.
#[derive(Clone, PartialEq, Eq)]
pub struct QuantWeylObject {
    pub space: SymplecticSpace,
}

impl fmt::Debug for ClassicalWeylObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Class{:?}", self.space)
    }
}

impl fmt::Debug for QuantWeylObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quant{:?}", self.space)
    }
}

impl From<SymplecticSpace> for ClassicalWeylObject {
    fn from(space: SymplecticSpace) -> Self {
        Self { space }
    }
}

impl From<SymplecticSpace> for QuantWeylObject {
    fn from(space: SymplecticSpace) -> Self {
        Self { space }
    }
}

pub fn quantize_object(c: &ClassicalWeylObject) -> QuantWeylObject {
    QuantWeylObject {
        space: c.space.clone(),
    }
}

pub fn classical_limit_object(q: &QuantWeylObject) -> ClassicalWeylObject {
    ClassicalWeylObject {
        space: q.space.clone(),
    }
}
