//! The categories of classical and quantized Weyl algebras and the functors
//! and transformations between them.

use super::{
    classical_limit_morphism, classical_limit_object, quantize_morphism, quantize_object, rescale,
    ClassicalWeylObject, Fiber, FunctorError, HbarValue, QuantWeylObject, Section, WeylMorphismSpec,
};
use crate::category::{Category, Functor, NaturalTransformation};
use crate::weyl::WeylElement;

/// Classical Weyl algebras with Poisson (chi, T) morphisms.
pub struct LinClass;

/// Quantized Weyl algebras with (chi, T) morphisms at every `hbar`.
pub struct LinQuant;

impl Category for LinClass {
    type Object = ClassicalWeylObject;
    type Arrow = WeylMorphismSpec;

    fn name(&self) -> String {
        "LinClass".into()
    }

    fn dom(&self, a: &WeylMorphismSpec) -> ClassicalWeylObject {
        ClassicalWeylObject {
            space: a.dom().clone(),
        }
    }

    fn cod(&self, a: &WeylMorphismSpec) -> ClassicalWeylObject {
        ClassicalWeylObject {
            space: a.cod().clone(),
        }
    }

    fn identity(&self, x: &ClassicalWeylObject) -> WeylMorphismSpec {
        WeylMorphismSpec::identity(&x.space, Fiber::Classical)
    }

    fn compose(&self, first: &WeylMorphismSpec, second: &WeylMorphismSpec) -> Option<WeylMorphismSpec> {
        first.then(second)
    }

    fn objects_equal(&self, x: &ClassicalWeylObject, y: &ClassicalWeylObject) -> bool {
        x == y
    }

    fn arrows_equal(&self, a: &WeylMorphismSpec, b: &WeylMorphismSpec) -> bool {
        a == b
    }
}

impl Category for LinQuant {
    type Object = QuantWeylObject;
    type Arrow = WeylMorphismSpec;

    fn name(&self) -> String {
        "LinQuant".into()
    }

    fn dom(&self, a: &WeylMorphismSpec) -> QuantWeylObject {
        QuantWeylObject {
            space: a.dom().clone(),
        }
    }

    fn cod(&self, a: &WeylMorphismSpec) -> QuantWeylObject {
        QuantWeylObject {
            space: a.cod().clone(),
        }
    }

    fn identity(&self, x: &QuantWeylObject) -> WeylMorphismSpec {
        WeylMorphismSpec::identity(&x.space, Fiber::Quantum)
    }

    fn compose(&self, first: &WeylMorphismSpec, second: &WeylMorphismSpec) -> Option<WeylMorphismSpec> {
        first.then(second)
    }

    fn objects_equal(&self, x: &QuantWeylObject, y: &QuantWeylObject) -> bool {
        x == y
    }

    fn arrows_equal(&self, a: &WeylMorphismSpec, b: &WeylMorphismSpec) -> bool {
        a == b
    }
}

/// `Q_W`.
pub struct QuantizationFunctor;

/// `L_W`.
pub struct ClassicalLimitFunctor;

impl Functor<LinClass, LinQuant> for QuantizationFunctor {
    fn name(&self) -> String {
        "Q_W".into()
    }

    fn map_object(&self, x: &ClassicalWeylObject) -> QuantWeylObject {
        quantize_object(x)
    }

    fn map_arrow(&self, a: &WeylMorphismSpec) -> Option<WeylMorphismSpec> {
        quantize_morphism(a).ok()
    }
}

impl Functor<LinQuant, LinClass> for ClassicalLimitFunctor {
    fn name(&self) -> String {
        "L_W".into()
    }

    fn map_object(&self, x: &QuantWeylObject) -> ClassicalWeylObject {
        classical_limit_object(x)
    }

    fn map_arrow(&self, a: &WeylMorphismSpec) -> Option<WeylMorphismSpec> {
        classical_limit_morphism(a).ok()
    }
}

/// `eta: 1 -> L_W . Q_W`. The quotient of the section algebra is identified
/// with the classical algebra over the same space, so each component is the
/// identity arrow; at element level it is `a -> [hbar -> Q_hbar(a)]`.
pub struct EtaTransformation;

/// `phi: 1 -> Q_W . L_W`, likewise componentwise the identity.
pub struct PhiTransformation;

impl NaturalTransformation<LinClass> for EtaTransformation {
    fn name(&self) -> String {
        "eta".into()
    }

    fn component(&self, x: &ClassicalWeylObject) -> Option<WeylMorphismSpec> {
        Some(WeylMorphismSpec::identity(&x.space, Fiber::Classical))
    }

    fn inverse_component(&self, x: &ClassicalWeylObject) -> Option<WeylMorphismSpec> {
        Some(WeylMorphismSpec::identity(&x.space, Fiber::Classical))
    }
}

impl NaturalTransformation<LinQuant> for PhiTransformation {
    fn name(&self) -> String {
        "phi".into()
    }

    fn component(&self, x: &QuantWeylObject) -> Option<WeylMorphismSpec> {
        Some(WeylMorphismSpec::identity(&x.space, Fiber::Quantum))
    }

    fn inverse_component(&self, x: &QuantWeylObject) -> Option<WeylMorphismSpec> {
        Some(WeylMorphismSpec::identity(&x.space, Fiber::Quantum))
    }
}

/// `eta_V` on elements: quantize to a section, then take its class mod `K_0`.
pub fn element_eta(a: &WeylElement) -> Result<WeylElement, FunctorError> {
    Ok(Section::quantize(a)?.quotient())
}

/// `phi_V` on elements of the `hbar = 1` fiber: spread over all `hbar` by
/// rescaling, take the classical limit, and quantize again at `hbar = 1`.
pub fn element_phi(a: &WeylElement) -> Result<WeylElement, FunctorError> {
    let one = HbarValue::one();
    let classical = Section::quantize(&rescale(a, &one, &one)?)?.quotient();
    rescale(&classical, &HbarValue::Zero, &one)
}
