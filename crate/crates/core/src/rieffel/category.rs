//! Translation-covariant models on `R^{2n}` with exact affine symplectic
//! arrows. An arrow `C_0(M) -> C_0(N)` is `f -> f o phi` for
//! `phi(z) = A z + b`, `phi: N -> M`.

use rand::Rng;

use crate::category::{Category, Functor, NaturalTransformation, Samples};
use crate::functors::Fiber;
use crate::random::{random_standard_symplectic, random_vector, seeded, standard_embedding};
use crate::symplectic::{
    is_symplectic_map, rational_to_f64, standard_space, LinearMapSpec, RationalMatrix,
    RationalVector, SymplecticError,
};

use super::{AffineSymplecticMap, RieffelError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RClassObject {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RQuantObject {
    pub n: usize,
}

impl From<usize> for RClassObject {
    fn from(n: usize) -> Self {
        Self { n }
    }
}

impl From<usize> for RQuantObject {
    fn from(n: usize) -> Self {
        Self { n }
    }
}

/// The pullback along `phi: N -> M`, viewed as an arrow `M -> N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineArrow {
    dom: usize,
    cod: usize,
    linear: RationalMatrix,
    shift: RationalVector,
    fiber: Fiber,
}

impl AffineArrow {
    /// `linear` is `2 dom x 2 cod` and must pull the standard form on
    /// `R^{2 dom}` back to the one on `R^{2 cod}`.
    pub fn new(
        dom: usize,
        cod: usize,
        linear: RationalMatrix,
        shift: RationalVector,
        fiber: Fiber,
    ) -> Result<Self, SymplecticError> {
        if linear.rows() != 2 * dom || linear.cols() != 2 * cod || shift.len() != 2 * dom {
            return Err(SymplecticError::Shape(format!(
                "affine arrow {dom} -> {cod} needs a {}x{} matrix and a {}-vector",
                2 * dom,
                2 * cod,
                2 * dom
            )));
        }
        let map = LinearMapSpec::new(linear.clone());
        if !is_symplectic_map(&map, &standard_space(cod), &standard_space(dom))? {
            return Err(SymplecticError::Shape("linear part is not symplectic".into()));
        }
        Ok(Self {
            dom,
            cod,
            linear,
            shift,
            fiber,
        })
    }

    pub fn identity(n: usize, fiber: Fiber) -> Self {
        Self {
            dom: n,
            cod: n,
            linear: RationalMatrix::identity(2 * n),
            shift: RationalVector::zeros(2 * n),
            fiber,
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn linear(&self) -> &RationalMatrix {
        &self.linear
    }

    pub fn shift(&self) -> &RationalVector {
        &self.shift
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

    /// `next o self`: pulls back along `phi_self o phi_next`.
    pub fn then(&self, next: &Self) -> Option<Self> {
        if self.cod != next.dom || self.fiber != next.fiber {
            return None;
        }
        let linear = self.linear.mul(&next.linear).ok()?;
        let shift = &self.linear.mul_vec(&next.shift).ok()? + &self.shift;
        Some(Self {
            dom: self.dom,
            cod: next.cod,
            linear,
            shift,
            fiber: self.fiber,
        })
    }

    /// The grid realization; only equal dimensions are realized on grids.
    pub fn to_numeric(&self) -> Result<AffineSymplecticMap, RieffelError> {
        if self.dom != self.cod {
            return Err(RieffelError::Dimension {
                expected: 2 * self.dom,
                got: 2 * self.cod,
            });
        }
        let linear = self
            .linear
            .to_rows()
            .iter()
            .map(|row| row.iter().map(rational_to_f64).collect())
            .collect();
        AffineSymplecticMap::new(linear, self.shift.to_f64())
    }
}

pub struct RClass;

pub struct RQuant;

macro_rules! affine_category {
    ($cat:ident, $obj:ident, $fiber:expr, $name:literal) => {
        impl Category for $cat {
            type Object = $obj;
            type Arrow = AffineArrow;

            fn name(&self) -> String {
                $name.into()
            }

            fn dom(&self, a: &AffineArrow) -> $obj {
                $obj { n: a.dom }
            }

            fn cod(&self, a: &AffineArrow) -> $obj {
                $obj { n: a.cod }
            }

            fn identity(&self, x: &$obj) -> AffineArrow {
                AffineArrow::identity(x.n, $fiber)
            }

            fn compose(&self, first: &AffineArrow, second: &AffineArrow) -> Option<AffineArrow> {
                first.then(second)
            }

            fn objects_equal(&self, x: &$obj, y: &$obj) -> bool {
                x == y
            }

            fn arrows_equal(&self, a: &AffineArrow, b: &AffineArrow) -> bool {
                a == b
            }
        }
    };
}

affine_category!(RClass, RClassObject, Fiber::Classical, "RClass");
affine_category!(RQuant, RQuantObject, Fiber::Quantum, "RQuant");

/// `Q_R`: the pullback along `phi` is already a homomorphism of every Moyal
/// product, so arrows keep their data.
pub struct RieffelQuantizationFunctor;

/// `L_R`.
pub struct RieffelLimitFunctor;

impl Functor<RClass, RQuant> for RieffelQuantizationFunctor {
    fn name(&self) -> String {
        "Q_R".into()
    }

    fn map_object(&self, x: &RClassObject) -> RQuantObject {
        RQuantObject { n: x.n }
    }

    fn map_arrow(&self, a: &AffineArrow) -> Option<AffineArrow> {
        (a.fiber == Fiber::Classical).then(|| a.with_fiber(Fiber::Quantum))
    }
}

impl Functor<RQuant, RClass> for RieffelLimitFunctor {
    fn name(&self) -> String {
        "L_R".into()
    }

    fn map_object(&self, x: &RQuantObject) -> RClassObject {
        RClassObject { n: x.n }
    }

    fn map_arrow(&self, a: &AffineArrow) -> Option<AffineArrow> {
        (a.fiber == Fiber::Quantum).then(|| a.with_fiber(Fiber::Classical))
    }
}

/// `eta_M: C_0(M) -> C_0(M)`, `f -> [hbar -> f_hbar] + K_0`.
pub struct RieffelEta;

/// `phi_M = Q_R(eta_M)`.
pub struct RieffelPhi;

impl NaturalTransformation<RClass> for RieffelEta {
    fn name(&self) -> String {
        "eta_R".into()
    }

    fn component(&self, x: &RClassObject) -> Option<AffineArrow> {
        Some(AffineArrow::identity(x.n, Fiber::Classical))
    }

    fn inverse_component(&self, x: &RClassObject) -> Option<AffineArrow> {
        self.component(x)
    }
}

impl NaturalTransformation<RQuant> for RieffelPhi {
    fn name(&self) -> String {
        "phi_R".into()
    }

    fn component(&self, x: &RQuantObject) -> Option<AffineArrow> {
        Some(AffineArrow::identity(x.n, Fiber::Quantum))
    }

    fn inverse_component(&self, x: &RQuantObject) -> Option<AffineArrow> {
        self.component(x)
    }
}

/// Chains of four arrows through `R^{2n}` with nonincreasing `n <= max_n`.
pub fn rieffel_chain_samples<C>(seed: u64, chains: usize, max_n: usize, fiber: Fiber) -> Samples<C>
where
    C: Category<Arrow = AffineArrow>,
    C::Object: From<usize>,
{
    let mut rng = seeded(seed);
    let mut samples = Samples::new(seed);
    for _ in 0..chains {
        let mut n = rng.gen_range(1..=max_n);
        let mut chain = Vec::with_capacity(4);
        for _ in 0..4 {
            let next = if n > 1 && rng.gen_bool(0.3) { n - 1 } else { n };
            let linear = random_standard_symplectic(&mut rng, n)
                .mul(&standard_embedding(next, n))
                .expect("shapes agree");
            let shift = random_vector(&mut rng, 2 * n, 3);
            chain.push(AffineArrow::new(n, next, linear, shift, fiber).expect("symplectic by construction"));
            n = next;
        }
        samples.objects.push(C::Object::from(chain[0].dom));
        for a in &chain {
            samples.objects.push(C::Object::from(a.cod));
        }
        samples.arrows.extend(chain.iter().cloned());
        for w in chain.windows(2) {
            samples.pairs.push((w[0].clone(), w[1].clone()));
        }
        for w in chain.windows(3) {
            samples.triples.push((w[0].clone(), w[1].clone(), w[2].clone()));
        }
    }
    samples
}
