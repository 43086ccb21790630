use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FunctorError, HbarValue, Section};
use crate::cyclotomic::Cyclotomic;
use crate::symplectic::{
    character_eval, is_symplectic_map, CharacterSpec, LinearMapSpec, RationalVector,
    SymplecticSpace,
};
use crate::weyl::{CoeffExpr, WeylElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fiber {
    Classical,
    Quantum,
}

/// A Weyl morphism `W(f) -> chi(f) W(Tf)` between two spaces.
///
/// The same `(chi, T)` data acts at every `hbar`; `fiber` records whether the
/// arrow belongs to the classical or the quantum category.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylMorphismSpec {
    chi: CharacterSpec,
    map: LinearMapSpec,
    dom: SymplecticSpace,
    cod: SymplecticSpace,
    fiber: Fiber,
}

impl WeylMorphismSpec {
    pub fn new(
        chi: CharacterSpec,
        map: LinearMapSpec,
        dom: SymplecticSpace,
        cod: SymplecticSpace,
        fiber: Fiber,
    ) -> Result<Self, FunctorError> {
        if chi.dim() != dom.dim() {
            return Err(FunctorError::Symplectic(
                crate::symplectic::SymplecticError::DimensionMismatch {
                    expected: dom.dim(),
                    found: chi.dim(),
                },
            ));
        }
        if !is_symplectic_map(&map, &dom, &cod)? {
            return Err(FunctorError::NotSymplectic);
        }
        Ok(Self {
            chi,
            map,
            dom,
            cod,
            fiber,
        })
    }

    /// Skips the symplecticity check; used to build negative controls.
    pub fn new_unvalidated(
        chi: CharacterSpec,
        map: LinearMapSpec,
        dom: SymplecticSpace,
        cod: SymplecticSpace,
        fiber: Fiber,
    ) -> Self {
        Self {
            chi,
            map,
            dom,
            cod,
            fiber,
        }
    }

    pub fn identity(space: &SymplecticSpace, fiber: Fiber) -> Self {
        Self {
            chi: CharacterSpec::trivial(space.dim()),
            map: LinearMapSpec::identity(space.dim()),
            dom: space.clone(),
            cod: space.clone(),
            fiber,
        }
    }

    pub fn chi(&self) -> &CharacterSpec {
        &self.chi
    }

    pub fn map(&self) -> &LinearMapSpec {
        &self.map
    }

    pub fn dom(&self) -> &SymplecticSpace {
        &self.dom
    }

    pub fn cod(&self) -> &SymplecticSpace {
        &self.cod
    }

    pub fn fiber(&self) -> Fiber {
        self.fiber
    }

    pub fn with_fiber(&self, fiber: Fiber) -> Self {
        Self {
            fiber,
            ..self.clone()
        }
    }

    /// `next . self`: character `theta_1 + T_1^T theta_2`, map `T_2 T_1`.
    /// `None` unless the fibers agree and `cod self = dom next`.
    pub fn then(&self, next: &Self) -> Option<Self> {
        if self.fiber != next.fiber || self.cod != next.dom {
            return None;
        }
        let chi = self.chi.product(&next.chi.pull_back(&self.map).ok()?);
        let map = next.map.compose(&self.map).ok()?;
        Some(Self {
            chi,
            map,
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            fiber: self.fiber,
        })
    }

    fn image_label(&self, f: &RationalVector) -> Result<(RationalVector, Cyclotomic), FunctorError> {
        let phase = character_eval(&self.chi, f)?;
        let tf = self.map.apply(f)?;
        Ok((tf, Cyclotomic::root_of_unity(phase.exponent())))
    }

    /// Linear extension of `W(f) -> chi(f) W(Tf)`; coefficients may carry
    /// `hbar`, so this acts on sections fiberwise as well.
    pub fn apply(&self, a: &WeylElement) -> Result<WeylElement, FunctorError> {
        if a.space() != &self.dom {
            return Err(FunctorError::Weyl(crate::weyl::WeylError::SpaceMismatch));
        }
        let mut terms = Vec::with_capacity(a.len());
        for (f, c) in a.terms() {
            let (tf, phase) = self.image_label(f)?;
            terms.push((tf, c.scale(&phase)));
        }
        Ok(WeylElement::from_terms(&self.cod, terms)?)
    }

    /// `alpha_hbar` on a fiber element; classical arrows only act at `hbar = 0`.
    pub fn apply_at(&self, a: &WeylElement, hbar: &HbarValue) -> Result<WeylElement, FunctorError> {
        if self.fiber == Fiber::Classical && !hbar.is_zero() {
            return Err(FunctorError::WrongFiber(self.fiber));
        }
        self.apply(a)
    }

    pub fn apply_section(&self, s: &Section) -> Result<Section, FunctorError> {
        Ok(Section::from_element(self.apply(s.element())?))
    }
}

impl fmt::Debug for WeylMorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?}: chi={:?}, T={:?}, {:?} -> {:?})",
            self.fiber, self.chi, self.map, self.dom, self.cod
        )
    }
}

/// Exact bracket preservation `alpha{W(f), W(g)} = {alpha W(f), alpha W(g)}`
/// on the given generator pairs.
pub fn poisson_morphism_check(
    m: &WeylMorphismSpec,
    pairs: &[(RationalVector, RationalVector)],
) -> Result<bool, FunctorError> {
    for (f, g) in pairs {
        let wf = WeylElement::generator(&m.dom, f)?;
        let wg = WeylElement::generator(&m.dom, g)?;
        let lhs = m.apply(&wf.poisson_bracket(&wg)?)?;
        let rhs = m.apply(&wf)?.poisson_bracket(&m.apply(&wg)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All pairs of standard basis vectors; bracket preservation on these is
/// equivalent to preservation on all generators by bilinearity.
pub(crate) fn basis_pairs(dim: usize) -> Vec<(RationalVector, RationalVector)> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            out.push((RationalVector::basis(dim, i), RationalVector::basis(dim, j)));
        }
    }
    out
}

fn basis_generators(dim: usize) -> Vec<RationalVector> {
    (0..dim).map(|i| RationalVector::basis(dim, i)).collect()
}

/// `Q_W` on arrows: the same data read in the quantum fiber.
pub fn quantize_morphism(m: &WeylMorphismSpec) -> Result<WeylMorphismSpec, FunctorError> {
    if m.fiber != Fiber::Classical {
        return Err(FunctorError::WrongFiber(m.fiber));
    }
    if !poisson_morphism_check(m, &basis_pairs(m.dom.dim()))? {
        return Err(FunctorError::NotPoisson);
    }
    Ok(m.with_fiber(Fiber::Quantum))
}

/// `L_W` on arrows: the unique `alpha_0` with `alpha_0 . phi_0 = phi_0' . alpha`.
pub fn classical_limit_morphism(m: &WeylMorphismSpec) -> Result<WeylMorphismSpec, FunctorError> {
    if m.fiber != Fiber::Quantum {
        return Err(FunctorError::WrongFiber(m.fiber));
    }
    let gens = basis_generators(m.dom.dim());
    let hbar = HbarValue::one();
    let half = HbarValue::Positive(crate::symplectic::rat(1, 2));
    if !smooth_check(m, &gens)? || !scaling_check(m, &hbar, &half, &gens)? {
        return Err(FunctorError::NotScaling);
    }
    Ok(m.with_fiber(Fiber::Classical))
}

/// The rescaling map `Q_to . Q_from^{-1}`. Only elements with constant
/// coefficients lie in the image of a quantization map, and on those the
/// relabelling leaves the representation unchanged.
pub fn rescale(
    a: &WeylElement,
    _from: &HbarValue,
    _to: &HbarValue,
) -> Result<WeylElement, FunctorError> {
    if !a.is_hbar_free() {
        return Err(FunctorError::NotInQuantizedImage);
    }
    Ok(a.clone())
}

/// The scaling condition on samples: `R . alpha_hbar . R^{-1}` agrees with
/// `alpha_hbar'` on each generator, and the rescaled map preserves the
/// products of all sampled pairs exactly.
pub fn scaling_check(
    m: &WeylMorphismSpec,
    hbar: &HbarValue,
    hbar_prime: &HbarValue,
    generators: &[RationalVector],
) -> Result<bool, FunctorError> {
    if hbar.is_zero() || hbar_prime.is_zero() {
        return Err(FunctorError::ZeroHbar);
    }
    let mut images = Vec::with_capacity(generators.len());
    for f in generators {
        let w = WeylElement::generator(&m.dom, f)?;
        let back = rescale(&w, hbar_prime, hbar)?;
        let transported = rescale(&m.apply(&back)?, hbar, hbar_prime)?;
        if transported != m.apply(&w)? {
            return Ok(false);
        }
        images.push((w, transported));
    }
    for (wf, af) in &images {
        for (wg, ag) in &images {
            let lhs = m.apply(&wf.multiply(wg)?)?;
            let rhs = af.multiply(ag)?;
            if !lhs.sub(&rhs)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff every image is a finite combination of quantized generators of
/// `cod`: same space and constant coefficients.
pub fn smooth_check_images(cod: &SymplecticSpace, images: &[WeylElement]) -> bool {
    images
        .iter()
        .all(|img| img.space() == cod && img.terms().all(|(_, c)| c.is_hbar_free()))
}

pub fn smooth_check(m: &WeylMorphismSpec, generators: &[RationalVector]) -> Result<bool, FunctorError> {
    let mut images = Vec::with_capacity(generators.len());
    for f in generators {
        images.push(m.apply(&WeylElement::generator(&m.dom, f)?)?);
    }
    Ok(smooth_check_images(&m.cod, &images))
}

impl WeylMorphismSpec {
    /// Convenience: the image of a single generator.
    pub fn image_of_generator(&self, f: &RationalVector) -> Result<WeylElement, FunctorError> {
        let (tf, phase) = self.image_label(f)?;
        Ok(WeylElement::monomial(&self.cod, &tf, CoeffExpr::constant(phase))?)
    }
}
