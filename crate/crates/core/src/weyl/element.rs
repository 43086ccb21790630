use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::{CoeffExpr, WeylError};
use crate::cyclotomic::Cyclotomic;
use crate::symplectic::{
    int, rational_to_f64, symplectic_form, RationalVector, SymplecticSpace,
};

/// A finite sum `sum_f c_f(hbar) W(f)` in the Weyl algebra over `space`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    space: SymplecticSpace,
    terms: BTreeMap<RationalVector, CoeffExpr>,
}

impl WeylElement {
    pub fn zero(space: &SymplecticSpace) -> Self {
        Self {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(space: &SymplecticSpace) -> Self {
        Self::generator(space, &space.zero_vector()).expect("zero vector fits its space")
    }

    pub fn generator(space: &SymplecticSpace, f: &RationalVector) -> Result<Self, WeylError> {
        Self::monomial(space, f, CoeffExpr::one())
    }

    pub fn monomial(
        space: &SymplecticSpace,
        f: &RationalVector,
        c: CoeffExpr,
    ) -> Result<Self, WeylError> {
        space.check_vector(f)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(f.clone(), c);
        }
        Ok(Self {
            space: space.clone(),
            terms,
        })
    }

    /// Sums the given terms, merging repeated labels.
    pub fn from_terms(
        space: &SymplecticSpace,
        terms: impl IntoIterator<Item = (RationalVector, CoeffExpr)>,
    ) -> Result<Self, WeylError> {
        let mut out = Self::zero(space);
        for (f, c) in terms {
            space.check_vector(&f)?;
            out.add_term(f, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, f: RationalVector, c: CoeffExpr) {
        let sum = match self.terms.remove(&f) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(f, sum);
        }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RationalVector, &CoeffExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, f: &RationalVector) -> Option<&CoeffExpr> {
        self.terms.get(f)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_hbar_free(&self) -> bool {
        self.terms.values().all(CoeffExpr::is_hbar_free)
    }

    fn check_same_space(&self, other: &Self) -> Result<(), WeylError> {
        if self.space != other.space {
            return Err(WeylError::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(f, c)| (f.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CoeffExpr) -> Self {
        let mut out = Self::zero(&self.space);
        for (f, a) in &self.terms {
            out.add_term(f.clone(), a.mul(c));
        }
        out
    }

    pub fn scale_exact(&self, c: &Cyclotomic) -> Self {
        self.scale(&CoeffExpr::constant(c.clone()))
    }

    /// Twisted product `W(f)W(g) = exp(-i*hbar*sigma(f,g)/2) W(f+g)`.
    pub fn multiply(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_same_space(other)?;
        let mut out = Self::zero(&self.space);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let s = symplectic_form(&self.space, f, g)?;
                let c = a.mul(b).shift_q(&(-s / int(2)));
                out.add_term(f + g, c);
            }
        }
        Ok(out)
    }

    /// The commutative product of the `hbar = 0` fiber, taken coefficientwise
    /// without any twist.
    pub fn multiply_classical(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_same_space(other)?;
        let mut out = Self::zero(&self.space);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                out.add_term(f + g, a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, WeylError> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// `W(f)* = W(-f)`, extended antilinearly.
    pub fn involution(&self) -> Self {
        Self {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (-f, c.conj()))
                .collect(),
        }
    }

    /// `{W(f), W(g)} = sigma(f,g) W(f+g)` on `hbar`-free elements.
    pub fn poisson_bracket(&self, other: &Self) -> Result<Self, WeylError> {
        self.check_same_space(other)?;
        if !self.is_hbar_free() || !other.is_hbar_free() {
            return Err(WeylError::HbarDependent);
        }
        let mut out = Self::zero(&self.space);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let s = symplectic_form(&self.space, f, g)?;
                if s.is_zero() {
                    continue;
                }
                out.add_term(f + g, a.mul(b).scale(&Cyclotomic::from_rational(s)));
            }
        }
        Ok(out)
    }

    /// Substitutes `hbar = 0`; the result is exact and `hbar`-free.
    pub fn evaluate_at_zero(&self) -> Self {
        let mut out = Self::zero(&self.space);
        for (f, c) in &self.terms {
            out.add_term(f.clone(), CoeffExpr::constant(c.eval_at_zero()));
        }
        out
    }

    pub fn evaluate_at(&self, hbar: f64) -> NumericElement {
        NumericElement {
            space: self.space.clone(),
            hbar,
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (f.clone(), c.eval(hbar)))
                .collect(),
        }
    }

    /// `(max |c_f|, sum |c_f|)` at `hbar`: a lower and an upper bound for the
    /// C*-norm. Equal for single terms, where they are the exact norm.
    pub fn norm_bounds(&self, hbar: f64) -> (f64, f64) {
        self.evaluate_at(hbar).norm_bounds()
    }

    /// Estimates the sup norm of the almost periodic function represented by
    /// an `hbar`-free element.
    ///
    /// The labels span a lattice of rank `r`; after rescaling they have
    /// integer coordinates `n_f`, and the element becomes the trigonometric
    /// polynomial `sum c_f exp(i n_f . t)` on the r-torus. It is maximized on a
    /// uniform grid whose size per axis is a power of two at least
    /// `resolution` and larger than twice the top frequency. Grids at
    /// successive resolutions are nested, so the estimate never decreases, and
    /// the grid mean of `|p|^2` equals `sum |c_f|^2`, so it never drops below
    /// `max |c_f|`.
    pub fn classical_sup_norm_estimate(&self, resolution: usize) -> Result<f64, WeylError> {
        if !self.is_hbar_free() {
            return Err(WeylError::HbarDependent);
        }
        if self.terms.is_empty() {
            return Ok(0.0);
        }
        let labels: Vec<&RationalVector> = self.terms.keys().collect();
        let coords = super::norm::integer_coordinates(&labels);
        let coeffs: Vec<Complex64> = self
            .terms
            .values()
            .map(|c| c.eval_at_zero().to_complex())
            .collect();
        Ok(super::norm::torus_sup(&coords, &coeffs, resolution))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(label, c)| format!("[{c:?}]W{label:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A Weyl element with complex coefficients at a fixed numeric `hbar`.
#[derive(Clone, Debug)]
pub struct NumericElement {
    space: SymplecticSpace,
    hbar: f64,
    terms: BTreeMap<RationalVector, Complex64>,
}

impl NumericElement {
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RationalVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, f: &RationalVector) -> Complex64 {
        self.terms.get(f).copied().unwrap_or_else(Complex64::zero)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self, WeylError> {
        if self.space != other.space {
            return Err(WeylError::SpaceMismatch);
        }
        let mut terms = self.terms.clone();
        for (f, c) in &other.terms {
            *terms.entry(f.clone()).or_insert_with(Complex64::zero) += c * sign;
        }
        Ok(Self {
            space: self.space.clone(),
            hbar: self.hbar,
            terms,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, WeylError> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeylError> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            hbar: self.hbar,
            terms: self.terms.iter().map(|(f, a)| (f.clone(), a * c)).collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, WeylError> {
        if self.space != other.space {
            return Err(WeylError::SpaceMismatch);
        }
        let mut terms: BTreeMap<RationalVector, Complex64> = BTreeMap::new();
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let s = rational_to_f64(&symplectic_form(&self.space, f, g)?);
                let phase = Complex64::from_polar(1.0, -0.5 * self.hbar * s);
                *terms.entry(f + g).or_insert_with(Complex64::zero) += a * b * phase;
            }
        }
        Ok(Self {
            space: self.space.clone(),
            hbar: self.hbar,
            terms,
        })
    }

    pub fn involution(&self) -> Self {
        Self {
            space: self.space.clone(),
            hbar: self.hbar,
            terms: self.terms.iter().map(|(f, c)| (-f, c.conj())).collect(),
        }
    }

    pub fn norm_bounds(&self) -> (f64, f64) {
        self.terms.values().fold((0.0f64, 0.0f64), |(lo, hi), c| {
            let m = c.norm();
            (lo.max(m), hi + m)
        })
    }

    /// Largest coefficient distance between two elements over the union of
    /// their labels.
    pub fn max_coefficient_distance(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for (f, c) in &self.terms {
            d = d.max((c - other.coefficient(f)).norm());
        }
        for (f, c) in &other.terms {
            d = d.max((c - self.coefficient(f)).norm());
        }
        d
    }
}
