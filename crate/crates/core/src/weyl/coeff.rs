use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::symplectic::{rational_to_f64, Rational};

/// A finite sum `sum amp * exp(i*(pi*p + q*hbar))` with `hbar` symbolic.
///
/// Terms sharing the same `q` are collected into one cyclotomic number, so the
/// map key is `q` and the value is the `hbar`-independent factor. Functions
/// `hbar -> exp(i*q*hbar)` with distinct `q` are linearly independent and the
/// cyclotomic factors are canonical, so structural equality is exact.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CoeffExpr {
    groups: BTreeMap<Rational, Cyclotomic>,
}

impl CoeffExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::from_group(Rational::zero(), c)
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(Cyclotomic::from_rational(r))
    }

    /// `exp(i*(pi*p + q*hbar))`.
    pub fn phase(p: &Rational, q: Rational) -> Self {
        Self::from_group(q, Cyclotomic::root_of_unity(p))
    }

    /// `exp(i*q*hbar)`.
    pub fn hbar_phase(q: Rational) -> Self {
        Self::from_group(q, Cyclotomic::one())
    }

    /// `(re + i*im) * exp(i*(pi*p + q*hbar))`.
    pub fn term(re: Rational, im: Rational, p: &Rational, q: Rational) -> Self {
        Self::from_group(
            q,
            Cyclotomic::from_gaussian(re, im).mul(&Cyclotomic::root_of_unity(p)),
        )
    }

    fn from_group(q: Rational, c: Cyclotomic) -> Self {
        let mut groups = BTreeMap::new();
        if !c.is_zero() {
            groups.insert(q, c);
        }
        Self { groups }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    /// True when no term depends on `hbar`.
    pub fn is_hbar_free(&self) -> bool {
        self.groups.keys().all(Zero::is_zero)
    }

    pub fn groups(&self) -> impl Iterator<Item = (&Rational, &Cyclotomic)> {
        self.groups.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &other.groups {
            out.accumulate(q.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            groups: self.groups.iter().map(|(q, c)| (q.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn accumulate(&mut self, q: Rational, c: Cyclotomic) {
        let sum = match self.groups.remove(&q) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.groups.insert(q, sum);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for (q1, c1) in &self.groups {
            for (q2, c2) in &other.groups {
                acc.accumulate(q1 + q2, c1.mul(c2));
            }
        }
        acc
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero();
        for (q, g) in &self.groups {
            out.accumulate(q.clone(), g.mul(c));
        }
        out
    }

    /// Multiplies by `exp(i*dq*hbar)`.
    pub fn shift_q(&self, dq: &Rational) -> Self {
        if dq.is_zero() {
            return self.clone();
        }
        Self {
            groups: self
                .groups
                .iter()
                .map(|(q, c)| (q + dq, c.clone()))
                .collect(),
        }
    }

    /// Complex conjugate as a function of real `hbar`.
    pub fn conj(&self) -> Self {
        Self {
            groups: self.groups.iter().map(|(q, c)| (-q, c.conj())).collect(),
        }
    }

    /// `|c(hbar)|^2` as a coefficient expression.
    pub fn abs_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Exact value at `hbar = 0`.
    pub fn eval_at_zero(&self) -> Cyclotomic {
        self.groups
            .values()
            .fold(Cyclotomic::zero(), |acc, c| acc.add(c))
    }

    pub fn eval(&self, hbar: f64) -> Complex64 {
        self.groups.iter().fold(Complex64::zero(), |acc, (q, c)| {
            acc + c.to_complex() * Complex64::from_polar(1.0, rational_to_f64(q) * hbar)
        })
    }

    /// Canonical term list `(amp_re, amp_im, p, q)` sorted by `(q, p)`.
    pub fn terms(&self) -> Vec<(Rational, Rational, Rational, Rational)> {
        let mut out = Vec::new();
        for (q, c) in &self.groups {
            let mut phase_terms = c.phase_terms();
            phase_terms.sort_by(|a, b| a.1.cmp(&b.1));
            for (amp, p) in phase_terms {
                out.push((amp, Rational::zero(), p, q.clone()));
            }
        }
        out
    }

    /// Number of `(p, q)` terms in the canonical list.
    pub fn term_count(&self) -> usize {
        self.groups.values().map(|c| c.terms().count()).sum()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl fmt::Debug for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(q, c)| {
                if q.is_zero() {
                    format!("({c:?})")
                } else if q.is_one() {
                    format!("({c:?})e^(i*h)")
                } else {
                    format!("({c:?})e^(i*{q}*h)")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
