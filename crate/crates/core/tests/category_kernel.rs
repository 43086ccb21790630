use quantaequiv_core::category::*;
use quantaequiv_core::functors::{
    ClassicalLimitFunctor, ClassicalWeylObject, EtaTransformation, Fiber, LinClass, LinQuant,
    PhiTransformation, QuantizationFunctor, WeylMorphismSpec,
};
use quantaequiv_core::random::{random_chain, seeded, weyl_chain_samples};
use quantaequiv_core::symplectic::{rat, CharacterSpec, RationalVector};

/// LinClass with composition in the wrong order; typed pairs still compose
/// whenever the reversed order happens to be defined.
struct ReversedLinClass;

impl Category for ReversedLinClass {
    type Object = ClassicalWeylObject;
    type Arrow = WeylMorphismSpec;

    fn name(&self) -> String {
        "reversed".into()
    }
    fn dom(&self, a: &WeylMorphismSpec) -> ClassicalWeylObject {
        LinClass.dom(a)
    }
    fn cod(&self, a: &WeylMorphismSpec) -> ClassicalWeylObject {
        LinClass.cod(a)
    }
    fn identity(&self, x: &ClassicalWeylObject) -> WeylMorphismSpec {
        LinClass.identity(x)
    }
    fn compose(&self, first: &WeylMorphismSpec, second: &WeylMorphismSpec) -> Option<WeylMorphismSpec> {
        // Drops the character of the first arrow.
        let composite = first.then(second)?;
        WeylMorphismSpec::new(
            second.chi().clone().pull_back(first.map()).ok()?,
            composite.map().clone(),
            composite.dom().clone(),
            composite.cod().clone(),
            Fiber::Classical,
        )
        .ok()
    }
    fn objects_equal(&self, x: &ClassicalWeylObject, y: &ClassicalWeylObject) -> bool {
        x == y
    }
    fn arrows_equal(&self, a: &WeylMorphismSpec, b: &WeylMorphismSpec) -> bool {
        a == b
    }
}

/// eta with one component twisted by a nontrivial character.
struct CorruptedEta;

impl NaturalTransformation<LinClass> for CorruptedEta {
    fn name(&self) -> String {
        "eta*".into()
    }
    fn component(&self, x: &ClassicalWeylObject) -> Option<WeylMorphismSpec> {
        let dim = x.space.dim();
        let mut theta = vec![rat(0, 1); dim];
        theta[0] = rat(1, 3);
        Some(
            WeylMorphismSpec::new(
                CharacterSpec::new(RationalVector::new(theta)),
                quantaequiv_core::symplectic::LinearMapSpec::identity(dim),
                x.space.clone(),
                x.space.clone(),
                Fiber::Classical,
            )
            .unwrap(),
        )
    }
    fn inverse_component(&self, x: &ClassicalWeylObject) -> Option<WeylMorphismSpec> {
        Some(LinClass.identity(x))
    }
}

struct MissingEta;

impl NaturalTransformation<LinClass> for MissingEta {
    fn name(&self) -> String {
        "eta?".into()
    }
    fn component(&self, _: &ClassicalWeylObject) -> Option<WeylMorphismSpec> {
        None
    }
    fn inverse_component(&self, _: &ClassicalWeylObject) -> Option<WeylMorphismSpec> {
        None
    }
}

#[test]
fn lin_class_with_fifty_arrows_passes() {
    let samples = weyl_chain_samples::<LinClass>(101, 13, 2, Fiber::Classical);
    assert!(samples.arrows.len() >= 50);
    let report = check_category_laws(&LinClass, &samples).unwrap();
    assert!(report.passed());
    assert!(report.count("associativity") > 0 && report.count("left-identity") >= 50);
    assert!(report.violations().next().is_none());
}

#[test]
fn terminal_category_passes() {
    let mut samples = Samples::<TerminalCategory>::new(0);
    samples.objects.push(());
    samples.arrows.push(());
    samples.pairs.push(((), ()));
    samples.triples.push(((), (), ()));
    assert!(check_category_laws(&TerminalCategory, &samples).unwrap().passed());
}

#[test]
fn broken_composition_is_reported() {
    let good = weyl_chain_samples::<LinClass>(103, 10, 2, Fiber::Classical);
    let mut samples = Samples::<ReversedLinClass>::new(good.seed);
    samples.arrows = good.arrows.clone();
    samples.pairs = good.pairs.clone();
    samples.triples = good.triples.clone();
    let report = check_category_laws(&ReversedLinClass, &samples).unwrap();
    assert!(!report.passed());
    let v = report.violations().next().unwrap();
    assert!(v.witness.is_some());
}

#[test]
fn ill_typed_samples_are_rejected() {
    let mut rng = seeded(107);
    let a = random_chain(&mut rng, 1, 1, Fiber::Classical).remove(0);
    let b = random_chain(&mut rng, 1, 1, Fiber::Classical).remove(0);
    let mut samples = Samples::<LinClass>::new(107);
    samples.pairs.push((a, b));
    assert!(matches!(
        check_category_laws(&LinClass, &samples),
        Err(CategoryError::IllTyped(_))
    ));
}

#[test]
fn functor_laws_hold_for_quantization_limit_and_identity() {
    let classical = weyl_chain_samples::<LinClass>(109, 8, 3, Fiber::Classical);
    let quantum = weyl_chain_samples::<LinQuant>(110, 8, 3, Fiber::Quantum);
    assert!(check_functor_laws(&QuantizationFunctor, &LinClass, &LinQuant, &classical).unwrap().passed());
    assert!(check_functor_laws(&ClassicalLimitFunctor, &LinQuant, &LinClass, &quantum).unwrap().passed());
    assert!(check_functor_laws(&IdentityFunctor, &LinClass, &LinClass, &classical).unwrap().passed());
}

#[test]
fn equivalences_pass_and_corruption_fails() {
    let classical = weyl_chain_samples::<LinClass>(113, 6, 2, Fiber::Classical);
    let quantum = weyl_chain_samples::<LinQuant>(114, 6, 2, Fiber::Quantum);
    let ok = check_equivalence(
        &LinClass, &LinQuant, &QuantizationFunctor, &ClassicalLimitFunctor,
        &EtaTransformation, &PhiTransformation, &classical, &quantum,
    )
    .unwrap();
    assert!(ok.passed());

    let id_eta = IdentityTransformation { category: &LinClass, label: "id" };
    let id_eq = check_equivalence(
        &LinClass, &LinClass, &IdentityFunctor, &IdentityFunctor,
        &id_eta, &id_eta, &classical, &classical,
    )
    .unwrap();
    assert!(id_eq.passed());

    let bad = check_equivalence(
        &LinClass, &LinQuant, &QuantizationFunctor, &ClassicalLimitFunctor,
        &CorruptedEta, &PhiTransformation, &classical, &quantum,
    )
    .unwrap();
    assert!(!bad.passed());
    assert!(bad.violations().any(|r| r.law == "eta*: invertible"));
    assert!(bad.violations().any(|r| r.law == "eta*: naturality"));

    assert!(matches!(
        check_equivalence(
            &LinClass, &LinQuant, &QuantizationFunctor, &ClassicalLimitFunctor,
            &MissingEta, &PhiTransformation, &classical, &quantum,
        ),
        Err(CategoryError::MissingComponent(_))
    ));
}

#[test]
fn reports_serialize_with_the_documented_fields() {
    let mut report = LawReport::new(5);
    report.record("associativity", "triple-0000", false, || "witness".into());
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let rec = &json["records"][0];
    for key in ["law", "sample_id", "status", "witness"] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
    assert_eq!(rec["status"], "fail");
}
