//! Defects in the strict-deformation conditions for the Weyl quantization.

use num_complex::Complex64;

use super::{FunctorError, HbarValue};
use crate::symplectic::{RationalVector, SymplecticSpace};
use crate::weyl::WeylElement;

/// `|| Q(a) Q(b) - Q(a b) ||` at `hbar`, as the `sum |c|` bound (exact when the
/// defect has a single term).
pub fn von_neumann_defect_elements(
    a: &WeylElement,
    b: &WeylElement,
    hbar: f64,
) -> Result<f64, FunctorError> {
    let defect = a.multiply(b)?.sub(&a.multiply_classical(b)?)?;
    Ok(defect.norm_bounds(hbar).1)
}

pub fn von_neumann_defect(
    space: &SymplecticSpace,
    f: &RationalVector,
    g: &RationalVector,
    hbar: f64,
) -> Result<f64, FunctorError> {
    let wf = WeylElement::generator(space, f)?;
    let wg = WeylElement::generator(space, g)?;
    von_neumann_defect_elements(&wf, &wg, hbar)
}

/// `|| (i/hbar)[Q(a), Q(b)] - Q({a, b}) ||` at `hbar`, as the `sum |c|` bound.
pub fn dirac_defect_elements(
    a: &WeylElement,
    b: &WeylElement,
    hbar: f64,
) -> Result<f64, FunctorError> {
    if hbar == 0.0 {
        return Err(FunctorError::ZeroHbar);
    }
    let commutator = a.commutator(b)?.evaluate_at(hbar);
    let bracket = a.poisson_bracket(b)?.evaluate_at(hbar);
    let defect = commutator
        .scale(Complex64::new(0.0, 1.0 / hbar))
        .sub(&bracket)?;
    Ok(defect.norm_bounds().1)
}

pub fn dirac_defect(
    space: &SymplecticSpace,
    f: &RationalVector,
    g: &RationalVector,
    hbar: f64,
) -> Result<f64, FunctorError> {
    let wf = WeylElement::generator(space, f)?;
    let wg = WeylElement::generator(space, g)?;
    dirac_defect_elements(&wf, &wg, hbar)
}

/// Rieffel's condition on a classical element: `hbar -> ||Q_hbar(a)||` is
/// continuous along the schedule. Norms are only known exactly for single
/// terms, so the check demands the norm bounds be the same at every point;
/// for constant coefficients that is the exact statement.
pub fn rieffel_condition_check(
    a: &WeylElement,
    schedule: &[HbarValue],
) -> Result<bool, FunctorError> {
    if !a.is_hbar_free() {
        return Err(FunctorError::NotInQuantizedImage);
    }
    let mut bounds = schedule.iter().map(|h| a.norm_bounds(h.to_f64()));
    let Some(first) = bounds.next() else {
        return Ok(true);
    };
    Ok(bounds.all(|b| b == first))
}
