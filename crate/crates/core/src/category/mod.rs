//! A small category framework with sample-based law checking.
//!
//! Categories here have infinitely many arrows, so every check runs over a
//! finite, seeded sample and returns a report of per-sample records.

mod report;

use std::fmt::Debug;

use thiserror::Error;

pub use report::{LawRecord, LawReport, LawStatus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CategoryError {
    #[error("ill-typed composition in sample {0}")]
    IllTyped(String),
    #[error("missing component at object {0}")]
    MissingComponent(String),
}

pub trait Category {
    type Object: Clone + Debug;
    type Arrow: Clone + Debug;

    fn name(&self) -> String;
    fn dom(&self, a: &Self::Arrow) -> Self::Object;
    fn cod(&self, a: &Self::Arrow) -> Self::Object;
    fn identity(&self, x: &Self::Object) -> Self::Arrow;
    /// `second . first`; `None` when `cod(first) != dom(second)`.
    fn compose(&self, first: &Self::Arrow, second: &Self::Arrow) -> Option<Self::Arrow>;
    fn objects_equal(&self, x: &Self::Object, y: &Self::Object) -> bool;
    fn arrows_equal(&self, a: &Self::Arrow, b: &Self::Arrow) -> bool;
}

pub trait Functor<C: Category, D: Category> {
    fn name(&self) -> String;
    fn map_object(&self, x: &C::Object) -> D::Object;
    fn map_arrow(&self, a: &C::Arrow) -> Option<D::Arrow>;
}

/// Components of a transformation between two endofunctors of `C`, together
/// with candidate inverses for the invertibility check.
pub trait NaturalTransformation<C: Category> {
    fn name(&self) -> String;
    fn component(&self, x: &C::Object) -> Option<C::Arrow>;
    fn inverse_component(&self, x: &C::Object) -> Option<C::Arrow>;
}

/// A finite, seeded sample from a category.
#[derive(Debug, Clone)]
pub struct Samples<C: Category> {
    pub seed: u64,
    pub objects: Vec<C::Object>,
    pub arrows: Vec<C::Arrow>,
    /// `(f, g)` with `cod f = dom g`.
    pub pairs: Vec<(C::Arrow, C::Arrow)>,
    /// `(f, g, h)` composable in that order.
    pub triples: Vec<(C::Arrow, C::Arrow, C::Arrow)>,
}

impl<C: Category> Samples<C> {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            objects: Vec::new(),
            arrows: Vec::new(),
            pairs: Vec::new(),
            triples: Vec::new(),
        }
    }
}

fn compose_or_err<C: Category>(
    c: &C,
    first: &C::Arrow,
    second: &C::Arrow,
    id: &str,
) -> Result<C::Arrow, CategoryError> {
    c.compose(first, second)
        .ok_or_else(|| CategoryError::IllTyped(id.to_string()))
}

fn check_composable<C: Category>(c: &C, f: &C::Arrow, g: &C::Arrow, id: &str) -> Result<(), CategoryError> {
    if c.objects_equal(&c.cod(f), &c.dom(g)) {
        Ok(())
    } else {
        Err(CategoryError::IllTyped(id.to_string()))
    }
}

pub fn check_category_laws<C: Category>(
    c: &C,
    samples: &Samples<C>,
) -> Result<LawReport, CategoryError> {
    let mut report = LawReport::new(samples.seed);
    for (i, f) in samples.arrows.iter().enumerate() {
        let id = format!("arrow-{i:04}");
        let left = compose_or_err(c, f, &c.identity(&c.cod(f)), &id)?;
        let right = compose_or_err(c, &c.identity(&c.dom(f)), f, &id)?;
        report.record(
            "left-identity",
            &id,
            c.arrows_equal(&left, f),
            || format!("id . f = {left:?}, f = {f:?}"),
        );
        report.record(
            "right-identity",
            &id,
            c.arrows_equal(&right, f),
            || format!("f . id = {right:?}, f = {f:?}"),
        );
    }
    for (i, (f, g)) in samples.pairs.iter().enumerate() {
        let id = format!("pair-{i:04}");
        check_composable(c, f, g, &id)?;
        let gf = compose_or_err(c, f, g, &id)?;
        let ok = c.objects_equal(&c.dom(&gf), &c.dom(f)) && c.objects_equal(&c.cod(&gf), &c.cod(g));
        report.record("composite-typing", &id, ok, || format!("g . f = {gf:?}"));
    }
    for (i, (f, g, h)) in samples.triples.iter().enumerate() {
        let id = format!("triple-{i:04}");
        check_composable(c, f, g, &id)?;
        check_composable(c, g, h, &id)?;
        let left = compose_or_err(c, &compose_or_err(c, f, g, &id)?, h, &id)?;
        let right = compose_or_err(c, f, &compose_or_err(c, g, h, &id)?, &id)?;
        report.record(
            "associativity",
            &id,
            c.arrows_equal(&left, &right),
            || format!("(h.g).f = {right:?}, h.(g.f) = {left:?}"),
        );
    }
    Ok(report)
}

pub fn check_functor_laws<C: Category, D: Category, F: Functor<C, D>>(
    f: &F,
    source: &C,
    target: &D,
    samples: &Samples<C>,
) -> Result<LawReport, CategoryError> {
    let mut report = LawReport::new(samples.seed);
    let fname = f.name();
    for (i, x) in samples.objects.iter().enumerate() {
        let id = format!("object-{i:04}");
        let image = f.map_arrow(&source.identity(x));
        let expected = target.identity(&f.map_object(x));
        let ok = image
            .as_ref()
            .is_some_and(|a| target.arrows_equal(a, &expected));
        report.record(&format!("{fname}: identity"), &id, ok, || {
            format!("F(id) = {image:?}, id_F = {expected:?}")
        });
    }
    for (i, a) in samples.arrows.iter().enumerate() {
        let id = format!("arrow-{i:04}");
        let image = f.map_arrow(a);
        let ok = image.as_ref().is_some_and(|fa| {
            target.objects_equal(&target.dom(fa), &f.map_object(&source.dom(a)))
                && target.objects_equal(&target.cod(fa), &f.map_object(&source.cod(a)))
        });
        report.record(&format!("{fname}: typing"), &id, ok, || {
            format!("F({a:?}) = {image:?}")
        });
    }
    for (i, (a, b)) in samples.pairs.iter().enumerate() {
        let id = format!("pair-{i:04}");
        let ba = compose_or_err(source, a, b, &id)?;
        let lhs = f.map_arrow(&ba);
        let rhs = match (f.map_arrow(a), f.map_arrow(b)) {
            (Some(fa), Some(fb)) => target.compose(&fa, &fb),
            _ => None,
        };
        let ok = matches!((&lhs, &rhs), (Some(l), Some(r)) if target.arrows_equal(l, r));
        report.record(&format!("{fname}: composition"), &id, ok, || {
            format!("F(g.f) = {lhs:?}, F(g).F(f) = {rhs:?}")
        });
    }
    Ok(report)
}

/// Checks a transformation `1_C -> G.F` (given as `eta` with components in
/// `C`) for invertible components and commuting naturality squares.
pub fn check_unit_transformation<C, D, F, G, N>(
    c: &C,
    f: &F,
    g: &G,
    eta: &N,
    samples: &Samples<C>,
    report: &mut LawReport,
) -> Result<(), CategoryError>
where
    C: Category,
    D: Category,
    F: Functor<C, D>,
    G: Functor<D, C>,
    N: NaturalTransformation<C>,
{
    let ename = eta.name();
    for (i, x) in samples.objects.iter().enumerate() {
        let id = format!("object-{i:04}");
        let comp = eta
            .component(x)
            .ok_or_else(|| CategoryError::MissingComponent(format!("{x:?}")))?;
        let inv = eta
            .inverse_component(x)
            .ok_or_else(|| CategoryError::MissingComponent(format!("{x:?}")))?;
        let gfx = g.map_object(&f.map_object(x));
        let typed = c.objects_equal(&c.dom(&comp), x) && c.objects_equal(&c.cod(&comp), &gfx);
        report.record(&format!("{ename}: component-typing"), &id, typed, || {
            format!("component {comp:?} at {x:?}")
        });
        let left = c.compose(&comp, &inv);
        let right = c.compose(&inv, &comp);
        let ok = left
            .as_ref()
            .is_some_and(|l| c.arrows_equal(l, &c.identity(x)))
            && right
                .as_ref()
                .is_some_and(|r| c.arrows_equal(r, &c.identity(&gfx)));
        report.record(&format!("{ename}: invertible"), &id, ok, || {
            format!("inv.eta = {left:?}, eta.inv = {right:?}")
        });
    }
    for (i, a) in samples.arrows.iter().enumerate() {
        let id = format!("arrow-{i:04}");
        let (x, y) = (c.dom(a), c.cod(a));
        let eta_x = eta
            .component(&x)
            .ok_or_else(|| CategoryError::MissingComponent(format!("{x:?}")))?;
        let eta_y = eta
            .component(&y)
            .ok_or_else(|| CategoryError::MissingComponent(format!("{y:?}")))?;
        let gfa = f.map_arrow(a).and_then(|fa| g.map_arrow(&fa));
        let upper = c.compose(a, &eta_y);
        let lower = gfa.as_ref().and_then(|gfa| c.compose(&eta_x, gfa));
        let ok = matches!((&upper, &lower), (Some(u), Some(l)) if c.arrows_equal(u, l));
        report.record(&format!("{ename}: naturality"), &id, ok, || {
            format!("eta_Y.a = {upper:?}, GF(a).eta_X = {lower:?}")
        });
    }
    Ok(())
}

/// Checks that `F: C -> D` and `G: D -> C` with `eta: 1_C -> GF` and
/// `phi: 1_D -> FG` form an equivalence on the samples.
#[allow(clippy::too_many_arguments)]
pub fn check_equivalence<C, D, F, G, E, P>(
    c: &C,
    d: &D,
    f: &F,
    g: &G,
    eta: &E,
    phi: &P,
    samples_c: &Samples<C>,
    samples_d: &Samples<D>,
) -> Result<LawReport, CategoryError>
where
    C: Category,
    D: Category,
    F: Functor<C, D>,
    G: Functor<D, C>,
    E: NaturalTransformation<C>,
    P: NaturalTransformation<D>,
{
    let mut report = LawReport::new(samples_c.seed);
    check_unit_transformation(c, f, g, eta, samples_c, &mut report)?;
    check_unit_transformation(d, g, f, phi, samples_d, &mut report)?;
    Ok(report)
}

/// Identity functor on any category.
pub struct IdentityFunctor;

impl<C: Category> Functor<C, C> for IdentityFunctor {
    fn name(&self) -> String {
        "Id".into()
    }

    fn map_object(&self, x: &C::Object) -> C::Object {
        x.clone()
    }

    fn map_arrow(&self, a: &C::Arrow) -> Option<C::Arrow> {
        Some(a.clone())
    }
}

/// The transformation whose components are all identity arrows.
pub struct IdentityTransformation<'a, C> {
    pub category: &'a C,
    pub label: &'static str,
}

impl<C: Category> NaturalTransformation<C> for IdentityTransformation<'_, C> {
    fn name(&self) -> String {
        self.label.into()
    }

    fn component(&self, x: &C::Object) -> Option<C::Arrow> {
        Some(self.category.identity(x))
    }

    fn inverse_component(&self, x: &C::Object) -> Option<C::Arrow> {
        Some(self.category.identity(x))
    }
}

/// The category with one object and one arrow.
pub struct TerminalCategory;

impl Category for TerminalCategory {
    type Object = ();
    type Arrow = ();

    fn name(&self) -> String {
        "1".into()
    }

    fn dom(&self, _: &()) {}

    fn cod(&self, _: &()) {}

    fn identity(&self, _: &()) {}

    fn compose(&self, _: &(), _: &()) -> Option<()> {
        Some(())
    }

    fn objects_equal(&self, _: &(), _: &()) -> bool {
        true
    }

    fn arrows_equal(&self, _: &(), _: &()) -> bool {
        true
    }
}
