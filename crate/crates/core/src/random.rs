//! Seeded generators for spaces, maps, characters and Weyl elements.
//!
//! Everything draws from a `ChaCha8Rng`, so a seed replays bit for bit.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::symplectic::{
    int, rat, standard_form, symplectic_form, CharacterSpec, LinearMapSpec, Rational,
    RationalMatrix, RationalVector, SymplecticSpace,
};
use crate::category::{Category, Samples};
use crate::functors::{Fiber, Section, WeylMorphismSpec};
use crate::weyl::{CoeffExpr, WeylElement};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMS: [i64; 5] = [1, 2, 3, 4, 6];
const Q_SHIFTS: [(i64, i64); 7] = [(-1, 1), (-1, 2), (-1, 4), (0, 1), (1, 4), (1, 2), (1, 1)];

pub fn small_rational(rng: &mut SeededRng, max_num: i64) -> Rational {
    let den = *DENOMS.choose(rng).expect("nonempty");
    rat(rng.gen_range(-max_num..=max_num), den)
}

pub fn random_vector(rng: &mut SeededRng, dim: usize, max_num: i64) -> RationalVector {
    RationalVector::new((0..dim).map(|_| small_rational(rng, max_num)).collect())
}

/// Product of a unit lower and a unit upper triangular matrix, with a signed
/// power-of-two diagonal in between. Always invertible.
pub fn random_invertible(rng: &mut SeededRng, dim: usize) -> RationalMatrix {
    let mut lower = RationalMatrix::identity(dim);
    let mut upper = RationalMatrix::identity(dim);
    let mut diag = RationalMatrix::identity(dim);
    for i in 0..dim {
        for j in 0..i {
            lower.set(i, j, small_rational(rng, 2));
            upper.set(j, i, small_rational(rng, 2));
        }
        let (a, b) = *[(1, 1), (-1, 1), (2, 1), (1, 2)].choose(rng).expect("nonempty");
        let d = rat(a, b);
        diag.set(i, i, d);
    }
    lower
        .mul(&diag)
        .and_then(|m| m.mul(&upper))
        .expect("square factors")
}

fn random_symmetric(rng: &mut SeededRng, n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = small_rational(rng, 2);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

/// A space `sigma = P^T J P` with random invertible `P`.
pub fn random_space(rng: &mut SeededRng, n: usize) -> SymplecticSpace {
    let p = random_invertible(rng, 2 * n);
    let form = p
        .transpose()
        .mul(&standard_form(n))
        .and_then(|m| m.mul(&p))
        .expect("square factors");
    SymplecticSpace::new(form).expect("congruent to the standard form")
}

/// Matrix `P` with `sigma = P^T J P`, found by symplectic Gram-Schmidt.
pub fn darboux_frame(space: &SymplecticSpace) -> RationalMatrix {
    let dim = space.dim();
    let n = dim / 2;
    let mut pool: Vec<RationalVector> = (0..dim).map(|i| RationalVector::basis(dim, i)).collect();
    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    while let Some(e) = pool.iter().position(|v| !v.is_zero()).map(|i| pool.remove(i)) {
        let (idx, s) = pool
            .iter()
            .enumerate()
            .map(|(i, w)| (i, symplectic_form(space, &e, w).expect("dims agree")))
            .find(|(_, s)| !s.is_zero())
            .expect("nondegenerate form pairs every vector");
        let f = pool.remove(idx).scale(&(int(1) / s));
        pool = pool
            .into_iter()
            .map(|v| {
                let a = symplectic_form(space, &v, &f).expect("dims agree");
                let b = symplectic_form(space, &v, &e).expect("dims agree");
                &(&v - &e.scale(&a)) + &f.scale(&b)
            })
            .filter(|v| !v.is_zero())
            .collect();
        es.push(e);
        fs.push(f);
    }
    // Columns e_1..e_n, f_1..f_n form a symplectic basis B with B^T sigma B = J.
    let mut b = RationalMatrix::zeros(dim, dim);
    for (k, v) in es.iter().chain(fs.iter()).enumerate() {
        for (i, x) in v.entries().iter().enumerate() {
            b.set(i, k, x.clone());
        }
    }
    b.inverse().expect("symplectic basis is a basis")
}

/// A random element of `Sp(2n, Q)` in the standard form: shears and
/// block-diagonal `diag(A, A^-T)` factors.
pub fn random_standard_symplectic(rng: &mut SeededRng, n: usize) -> RationalMatrix {
    let dim = 2 * n;
    let mut acc = RationalMatrix::identity(dim);
    for _ in 0..3 {
        let factor = match rng.gen_range(0..3) {
            0 | 1 => {
                let s = random_symmetric(rng, n);
                let mut m = RationalMatrix::identity(dim);
                let upper = rng.gen_bool(0.5);
                for i in 0..n {
                    for j in 0..n {
                        if upper {
                            m.set(i, n + j, s.get(i, j).clone());
                        } else {
                            m.set(n + i, j, s.get(i, j).clone());
                        }
                    }
                }
                m
            }
            _ => {
                let a = random_invertible(rng, n);
                let a_inv_t = a.inverse().expect("invertible").transpose();
                let mut m = RationalMatrix::zeros(dim, dim);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, a.get(i, j).clone());
                        m.set(n + i, n + j, a_inv_t.get(i, j).clone());
                    }
                }
                m
            }
        };
        acc = factor.mul(&acc).expect("square factors");
    }
    acc
}

/// Standard symplectic embedding `R^{2m} -> R^{2m'}`.
pub fn standard_embedding(m: usize, m_big: usize) -> RationalMatrix {
    let mut e = RationalMatrix::zeros(2 * m_big, 2 * m);
    for i in 0..m {
        e.set(i, i, int(1));
        e.set(m_big + i, m + i, int(1));
    }
    e
}

/// A random symplectic map `dom -> cod`; requires `dim dom <= dim cod`.
pub fn random_symplectic_map(
    rng: &mut SeededRng,
    dom: &SymplecticSpace,
    cod: &SymplecticSpace,
) -> LinearMapSpec {
    assert!(dom.dim() <= cod.dim(), "symplectic maps are injective");
    let m = dom.dim() / 2;
    let p_dom = darboux_frame(dom);
    let p_cod_inv = darboux_frame(cod).inverse().expect("frame is invertible");
    let s = random_standard_symplectic(rng, m);
    let t = p_cod_inv
        .mul(&standard_embedding(m, cod.dim() / 2))
        .and_then(|x| x.mul(&s))
        .and_then(|x| x.mul(&p_dom))
        .expect("shapes agree");
    LinearMapSpec::new(t)
}

pub fn random_character(rng: &mut SeededRng, dim: usize) -> CharacterSpec {
    CharacterSpec::new(random_vector(rng, dim, 3))
}

pub fn random_coeff(rng: &mut SeededRng, hbar_free: bool) -> CoeffExpr {
    let count = rng.gen_range(1..=2);
    let mut c = CoeffExpr::zero();
    for _ in 0..count {
        let q = if hbar_free {
            int(0)
        } else {
            let (a, b) = *Q_SHIFTS.choose(rng).expect("nonempty");
            rat(a, b)
        };
        let p = rat(rng.gen_range(0..12), 6);
        c = c.add(&CoeffExpr::term(
            small_rational(rng, 3),
            small_rational(rng, 3),
            &p,
            q,
        ));
    }
    c
}

/// An element with at most `max_terms` terms over a small label pool, so
/// products regularly produce coinciding labels.
pub fn random_element(
    rng: &mut SeededRng,
    space: &SymplecticSpace,
    max_terms: usize,
    hbar_free: bool,
) -> WeylElement {
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..count)
        .map(|_| {
            (
                random_vector(rng, space.dim(), 2),
                random_coeff(rng, hbar_free),
            )
        })
        .collect();
    WeylElement::from_terms(space, terms).expect("labels fit the space")
}

/// A pair of generator labels with `|sigma(f, g)| <= 2`; roughly one pair in
/// five is made commuting on purpose.
pub fn random_generator_pair(
    rng: &mut SeededRng,
    space: &SymplecticSpace,
) -> (RationalVector, RationalVector) {
    loop {
        let f = random_vector(rng, space.dim(), 2);
        let g = if rng.gen_range(0..5) == 0 {
            f.scale(&small_rational(rng, 2))
        } else {
            random_vector(rng, space.dim(), 2)
        };
        let s = symplectic_form(space, &f, &g).expect("dims agree");
        if s.clone() * &s <= int(4) {
            return (f, g);
        }
    }
}

/// A random arrow `dom -> cod` with a random character.
pub fn random_morphism(
    rng: &mut SeededRng,
    dom: &SymplecticSpace,
    cod: &SymplecticSpace,
    fiber: Fiber,
) -> WeylMorphismSpec {
    let t = random_symplectic_map(rng, dom, cod);
    let chi = random_character(rng, dom.dim());
    WeylMorphismSpec::new(chi, t, dom.clone(), cod.clone(), fiber).expect("map is symplectic")
}

/// A composable chain of `len` arrows through spaces of nondecreasing
/// dimension, each of half-dimension at most `max_n`.
pub fn random_chain(
    rng: &mut SeededRng,
    len: usize,
    max_n: usize,
    fiber: Fiber,
) -> Vec<WeylMorphismSpec> {
    let mut n = rng.gen_range(1..=max_n);
    let mut space = random_space(rng, n);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        if n < max_n && rng.gen_bool(0.3) {
            n += 1;
        }
        let next = random_space(rng, n);
        out.push(random_morphism(rng, &space, &next, fiber));
        space = next;
    }
    out
}

/// A random section; about half of them are pushed into `K_0` by removing
/// their value at `hbar = 0`.
pub fn random_section(rng: &mut SeededRng, space: &SymplecticSpace, max_terms: usize) -> Section {
    let count = rng.gen_range(1..=max_terms);
    let mut terms = Vec::with_capacity(count);
    let vanish_all = rng.gen_bool(0.5);
    for _ in 0..count {
        let mut c = random_coeff(rng, false);
        if vanish_all || rng.gen_bool(0.2) {
            c = c.sub(&CoeffExpr::constant(c.eval_at_zero()));
        }
        terms.push((random_vector(rng, space.dim(), 2), c));
    }
    Section::from_element(WeylElement::from_terms(space, terms).expect("labels fit the space"))
}

/// Objects, arrows, composable pairs and triples drawn from `chains` random
/// chains of length 4 in the given fiber.
pub fn weyl_chain_samples<C>(seed: u64, chains: usize, max_n: usize, fiber: Fiber) -> Samples<C>
where
    C: Category<Arrow = WeylMorphismSpec>,
    C::Object: From<SymplecticSpace>,
{
    let mut rng = seeded(seed);
    let mut samples = Samples::new(seed);
    for _ in 0..chains {
        let chain = random_chain(&mut rng, 4, max_n, fiber);
        samples.objects.push(C::Object::from(chain[0].dom().clone()));
        for m in &chain {
            samples.objects.push(C::Object::from(m.cod().clone()));
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
