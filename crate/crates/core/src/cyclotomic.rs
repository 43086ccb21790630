//! Exact arithmetic with finite rational combinations of roots of unity.
//!
//! A number is stored as `sum_t c_t * exp(2*pi*i*t)` with `t` in `Q/Z`, kept
//! in a canonical basis. For a root of unity `exp(2*pi*i*t)` with `t = a/d`,
//! each prime power `p^b || d` contributes a component `u_p in Z/p^b`
//! (the CRT decomposition `t = u_p/p^b + ...`). The basis consists of the
//! roots whose leading base-`p` digit `floor(u_p / p^(b-1))` differs from
//! `p - 1` for every prime. Any other root is rewritten through
//! `sum_{j<p} exp(2*pi*i*(t + j/p)) = 0`. The digit of a root does not
//! depend on which cyclotomic field it is viewed in, so the basis for
//! `Q(zeta_M)` is a subset of the basis for `Q(zeta_N)` when `M | N`; the
//! reduced expansion is therefore unique and equality is structural.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::symplectic::{int, rational_to_f64, rem_euclid, Rational};

fn factor_cache() -> &'static Mutex<HashMap<BigInt, Vec<(BigInt, u32)>>> {
    static CACHE: OnceLock<Mutex<HashMap<BigInt, Vec<(BigInt, u32)>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Prime factorization by trial division; denominators here stay small.
fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    if let Some(f) = factor_cache().lock().expect("factor cache poisoned").get(n) {
        return f.clone();
    }
    let mut out = Vec::new();
    let mut rest = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut b = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            b += 1;
        }
        if b > 0 {
            out.push((p.clone(), b));
        }
        p += 1;
    }
    if rest > BigInt::one() {
        out.push((rest, 1));
    }
    factor_cache()
        .lock()
        .expect("factor cache poisoned")
        .insert(n.clone(), out.clone());
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// `t mod 1`. Subtracting an integer keeps the fraction in lowest terms.
fn frac(t: &Rational) -> Rational {
    let (n, d) = (t.numer(), t.denom());
    if !n.is_negative() && n < d {
        return t.clone();
    }
    Rational::new_raw(n.mod_floor(d), d.clone())
}

/// Some prime `p` for which the root `exp(2*pi*i*t)` has leading digit `p-1`.
fn excluded_prime(t: &Rational) -> Option<BigInt> {
    thread_local! {
        static SEEN: RefCell<HashMap<Rational, Option<BigInt>>> = RefCell::new(HashMap::new());
    }
    if let Some(hit) = SEEN.with(|m| m.borrow().get(t).cloned()) {
        return hit;
    }
    let found = find_excluded_prime(t);
    SEEN.with(|m| m.borrow_mut().insert(t.clone(), found.clone()));
    found
}

fn find_excluded_prime(t: &Rational) -> Option<BigInt> {
    let d = t.denom();
    if d.is_one() {
        return None;
    }
    for (p, b) in factor(d) {
        let pb = p.pow(b);
        let m = d / &pb;
        let u = (t.numer() * mod_inverse(&m, &pb)).mod_floor(&pb);
        let digit = u / p.pow(b - 1);
        if digit == &p - 1 {
            return Some(p);
        }
    }
    None
}

/// Rewrites arbitrary `(t, c)` terms into the canonical basis.
fn reduce(terms: impl IntoIterator<Item = (Rational, Rational)>) -> BTreeMap<Rational, Rational> {
    let mut out: BTreeMap<Rational, Rational> = BTreeMap::new();
    let mut stack: Vec<(Rational, Rational)> = terms
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| (frac(&t), c))
        .collect();
    while let Some((t, c)) = stack.pop() {
        match excluded_prime(&t) {
            Some(p) => {
                let pr = Rational::from_integer(p.clone());
                let k_max = p.to_u64().expect("prime fits in u64");
                for k in 1..k_max {
                    stack.push((frac(&(&t - int(k as i64) / &pr)), -c.clone()));
                }
            }
            None => accumulate(&mut out, t, c),
        }
    }
    out
}

fn accumulate(map: &mut BTreeMap<Rational, Rational>, t: Rational, c: Rational) {
    let sum = match map.remove(&t) {
        Some(existing) => existing + c,
        None => c,
    };
    if !sum.is_zero() {
        map.insert(t, sum);
    }
}

/// An exact element of the maximal cyclotomic extension of `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyclotomic {
    terms: BTreeMap<Rational, Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Rational::zero(), r);
        }
        Self { terms }
    }

    /// `re + i*im`.
    pub fn from_gaussian(re: Rational, im: Rational) -> Self {
        Self {
            terms: reduce([(Rational::zero(), re), (Rational::new(1.into(), 4.into()), im)]),
        }
    }

    /// `exp(i*pi*p)` for rational `p`.
    pub fn root_of_unity(p: &Rational) -> Self {
        Self {
            terms: reduce([(p / int(2), Rational::one())]),
        }
    }

    /// Smallest `N` with the number in `Q(zeta_N)` as represented.
    pub fn order(&self) -> BigInt {
        self.terms
            .keys()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()))
    }

    /// Canonical `(t, c)` pairs: the number is `sum c * exp(2*pi*i*t)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    /// Canonical `(amp, p)` pairs with the number equal to
    /// `sum amp * exp(i*pi*p)`, `p` in `[0, 2)`, sorted by `p`.
    pub fn phase_terms(&self) -> Vec<(Rational, Rational)> {
        self.terms
            .iter()
            .map(|(t, c)| (c.clone(), t * int(2)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rational value when the number lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Rational::zero()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        // The union of two canonical expansions is canonical.
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            accumulate(&mut terms, t.clone(), c.clone());
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * r)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                raw.push((t1 + t2, c1 * c2));
            }
        }
        Self { terms: reduce(raw) }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            terms: reduce(self.terms.iter().map(|(t, c)| (-t, c.clone()))),
        }
    }

    /// `|z|^2` as an exact (real) cyclotomic number.
    pub fn abs_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, (t, c)| {
            acc + Complex64::from_polar(
                rational_to_f64(c),
                2.0 * std::f64::consts::PI * rational_to_f64(t),
            )
        })
    }

    /// If the number is a root of unity, its exponent `p` in `[0, 2)` with
    /// value `exp(i*pi*p)`.
    pub fn as_root_of_unity(&self) -> Option<Rational> {
        let z = self.to_complex();
        if self.is_zero() || (z.norm() - 1.0).abs() > 1e-9 {
            return None;
        }
        // Roots of unity in Q(zeta_N) are +-zeta_N^k, so p has denominator N.
        let n = self.order();
        let j = (z.arg() / std::f64::consts::PI * n.to_f64()?).round();
        let p = rem_euclid(&Rational::new(BigInt::from(j as i64), n), &int(2));
        (Self::root_of_unity(&p) == *self).then_some(p)
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if t.is_zero() {
                    format!("{c}")
                } else {
                    format!("{c}*e({t})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::rat;

    #[test]
    fn roots_of_unity_relations() {
        assert_eq!(Cyclotomic::root_of_unity(&int(1)), Cyclotomic::from_rational(int(-1)));
        assert_eq!(
            Cyclotomic::root_of_unity(&rat(1, 2)),
            Cyclotomic::from_gaussian(int(0), int(1))
        );
        let w = Cyclotomic::root_of_unity(&rat(2, 3));
        let sum = Cyclotomic::one().add(&w).add(&w.mul(&w));
        assert!(sum.is_zero());
    }

    #[test]
    fn all_fifth_roots_sum_to_zero() {
        let sum = (0..5).fold(Cyclotomic::zero(), |acc, k| {
            acc.add(&Cyclotomic::root_of_unity(&rat(2 * k, 5)))
        });
        assert!(sum.is_zero());
    }

    #[test]
    fn canonical_form_moves_to_the_conductor() {
        // exp(i*pi/3) = -exp(4*pi*i/3); the sixth root is rewritten.
        let z6 = Cyclotomic::root_of_unity(&rat(1, 3));
        assert_eq!(z6.order(), BigInt::from(3));
        assert_eq!(z6, Cyclotomic::root_of_unity(&rat(4, 3)).neg());
        // zeta_3^2 = -1 - zeta_3
        let w2 = Cyclotomic::root_of_unity(&rat(4, 3));
        let expected =
            Cyclotomic::from_rational(int(-1)).sub(&Cyclotomic::root_of_unity(&rat(2, 3)));
        assert_eq!(w2, expected);
    }

    #[test]
    fn equality_across_orders() {
        let w = Cyclotomic::root_of_unity(&rat(2, 3));
        let z15 = Cyclotomic::root_of_unity(&rat(2, 15));
        let via15 = w.mul(&z15).mul(&z15.conj());
        assert_eq!(via15, w);
        assert_ne!(via15, Cyclotomic::one());
    }

    #[test]
    fn conjugation_and_modulus() {
        let z = Cyclotomic::from_gaussian(rat(3, 1), rat(4, 1));
        assert_eq!(z.abs_squared(), Cyclotomic::from_rational(int(25)));
        let w = Cyclotomic::root_of_unity(&rat(2, 7));
        assert_eq!(w.abs_squared(), Cyclotomic::one());
        assert_eq!(w.conj(), Cyclotomic::root_of_unity(&rat(-2, 7)));
    }

    #[test]
    fn large_conductors_stay_cheap() {
        let a = Cyclotomic::root_of_unity(&rat(2, 997 * 6));
        let b = Cyclotomic::root_of_unity(&rat(-2, 997 * 6));
        assert_eq!(a.mul(&b), Cyclotomic::one());
        assert_eq!(a.abs_squared(), Cyclotomic::one());
        let expected = Complex64::from_polar(1.0, std::f64::consts::PI / 2991.0);
        assert!((a.to_complex() - expected).norm() < 1e-12);
    }

    #[test]
    fn complex_value_matches_float_evaluation() {
        let z = Cyclotomic::root_of_unity(&rat(1, 3))
            .scale(&rat(1, 2))
            .add(&Cyclotomic::from_gaussian(int(1), rat(-1, 4)));
        let expected = Complex64::from_polar(0.5, std::f64::consts::PI / 3.0)
            + Complex64::new(1.0, -0.25);
        assert!((z.to_complex() - expected).norm() < 1e-14);
    }

    #[test]
    fn root_of_unity_detection() {
        let w = Cyclotomic::root_of_unity(&rat(5, 6));
        assert_eq!(w.as_root_of_unity(), Some(rat(5, 6)));
        assert_eq!(Cyclotomic::from_rational(int(-1)).as_root_of_unity(), Some(int(1)));
        assert_eq!(Cyclotomic::from_rational(int(2)).as_root_of_unity(), None);
        let sum = Cyclotomic::one().add(&Cyclotomic::root_of_unity(&rat(2, 5)));
        assert_eq!(sum.as_root_of_unity(), None);
    }

    #[test]
    fn reduction_is_idempotent() {
        let z = Cyclotomic::root_of_unity(&rat(7, 12))
            .add(&Cyclotomic::root_of_unity(&rat(5, 9)));
        let again = Cyclotomic {
            terms: reduce(z.terms.clone()),
        };
        assert_eq!(again, z);
    }
}
