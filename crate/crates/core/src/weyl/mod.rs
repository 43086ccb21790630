//! Exact Weyl algebras with symbolic `hbar`.

mod coeff;
mod element;
pub(crate) mod norm;
mod serial;

use thiserror::Error;

use crate::symplectic::SymplecticError;

pub use coeff::CoeffExpr;
pub use element::{NumericElement, WeylElement};
pub use serial::{ElementDoc, LabelDoc, TermDoc};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeylError {
    #[error("elements live over different symplectic spaces")]
    SpaceMismatch,
    #[error("coefficient depends on hbar where an hbar-free element is required")]
    HbarDependent,
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error("malformed element: {0}")]
    Format(String),
}
