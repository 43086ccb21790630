use num_complex::Complex64;
use quantaequiv_core::cyclotomic::Cyclotomic;
use quantaequiv_core::random::{random_element, random_space, random_vector, seeded};
use quantaequiv_core::symplectic::{int, rat, standard_space, symplectic_form, RationalVector};
use quantaequiv_core::weyl::{CoeffExpr, WeylElement, WeylError};

fn v(xs: &[i64]) -> RationalVector {
    RationalVector::from_ints(xs)
}

#[test]
fn zero_label_generator_is_the_unit() {
    let s = standard_space(1);
    let u = WeylElement::generator(&s, &v(&[0, 0])).unwrap();
    assert_eq!(u, WeylElement::unit(&s));
    let a = random_element(&mut seeded(1), &s, 4, false);
    assert_eq!(a.multiply(&u).unwrap(), a);
    assert_eq!(u.multiply(&a).unwrap(), a);
}

#[test]
fn generator_has_one_unit_term() {
    let s = standard_space(1);
    let w = WeylElement::generator(&s, &v(&[1, 0])).unwrap();
    assert_eq!(w.len(), 1);
    assert!(w.coefficient(&v(&[1, 0])).unwrap().is_one());
}

#[test]
fn adjoint_times_generator_is_unit() {
    let s = standard_space(2);
    let w = WeylElement::generator(&s, &v(&[1, -2, 3, 1])).unwrap();
    assert_eq!(w.involution().multiply(&w).unwrap(), WeylElement::unit(&s));
}

#[test]
fn twisted_product_of_canonical_pair() {
    let s = standard_space(1);
    let wf = WeylElement::generator(&s, &v(&[1, 0])).unwrap();
    let wg = WeylElement::generator(&s, &v(&[0, 1])).unwrap();
    let prod = wf.multiply(&wg).unwrap();
    let expected =
        WeylElement::monomial(&s, &v(&[1, 1]), CoeffExpr::hbar_phase(rat(-1, 2))).unwrap();
    assert_eq!(prod, expected);
}

#[test]
fn reversed_product_differs_by_full_phase() {
    let mut rng = seeded(5);
    let s = random_space(&mut rng, 2);
    for _ in 0..50 {
        let f = random_vector(&mut rng, 4, 3);
        let g = random_vector(&mut rng, 4, 3);
        let wf = WeylElement::generator(&s, &f).unwrap();
        let wg = WeylElement::generator(&s, &g).unwrap();
        let sigma = symplectic_form(&s, &f, &g).unwrap();
        let fg = wf.multiply(&wg).unwrap();
        let gf = wg.multiply(&wf).unwrap();
        assert_eq!(fg, gf.scale(&CoeffExpr::hbar_phase(-sigma)));
    }
}

#[test]
fn involution_examples() {
    let s = standard_space(1);
    let u = WeylElement::unit(&s);
    assert_eq!(u.involution(), u);
    let c = CoeffExpr::term(rat(2, 3), rat(-1, 5), &rat(1, 3), rat(1, 2));
    let a = WeylElement::monomial(&s, &v(&[2, -1]), c.clone()).unwrap();
    let expected = WeylElement::monomial(&s, &v(&[-2, 1]), c.conj()).unwrap();
    assert_eq!(a.involution(), expected);
    assert_eq!(a.involution().involution(), a);
}

#[test]
fn involution_reverses_products() {
    let mut rng = seeded(9);
    let s = random_space(&mut rng, 1);
    for _ in 0..100 {
        let a = random_element(&mut rng, &s, 2, false);
        let b = random_element(&mut rng, &s, 2, false);
        let lhs = a.multiply(&b).unwrap().involution();
        let rhs = b.involution().multiply(&a.involution()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn poisson_bracket_examples() {
    let s = standard_space(1);
    let wf = WeylElement::generator(&s, &v(&[1, 0])).unwrap();
    let wg = WeylElement::generator(&s, &v(&[0, 1])).unwrap();
    assert!(wf.poisson_bracket(&wf).unwrap().is_zero());
    assert_eq!(
        wf.poisson_bracket(&wg).unwrap(),
        WeylElement::generator(&s, &v(&[1, 1])).unwrap()
    );
}

#[test]
fn poisson_bracket_rejects_hbar_dependence() {
    let s = standard_space(1);
    let a = WeylElement::monomial(&s, &v(&[1, 0]), CoeffExpr::hbar_phase(int(1))).unwrap();
    let b = WeylElement::generator(&s, &v(&[0, 1])).unwrap();
    assert_eq!(a.poisson_bracket(&b), Err(WeylError::HbarDependent));
}

#[test]
fn jacobi_on_random_generators() {
    let mut rng = seeded(13);
    let s = random_space(&mut rng, 2);
    for _ in 0..100 {
        let [a, b, c] = [0, 1, 2].map(|_| WeylElement::generator(&s, &random_vector(&mut rng, 4, 3)).unwrap());
        let j = a
            .poisson_bracket(&b.poisson_bracket(&c).unwrap())
            .unwrap()
            .add(&b.poisson_bracket(&c.poisson_bracket(&a).unwrap()).unwrap())
            .unwrap()
            .add(&c.poisson_bracket(&a.poisson_bracket(&b).unwrap()).unwrap())
            .unwrap();
        assert!(j.is_zero());
    }
}

#[test]
fn evaluation_examples() {
    let c = CoeffExpr::hbar_phase(rat(-1, 2));
    assert_eq!(c.eval_at_zero(), Cyclotomic::one());
    let at_pi = c.eval(std::f64::consts::PI);
    assert!((at_pi - Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_2)).norm() < 1e-15);
}

#[test]
fn evaluation_is_a_star_homomorphism() {
    let mut rng = seeded(17);
    let s = random_space(&mut rng, 2);
    for _ in 0..100 {
        let a = random_element(&mut rng, &s, 3, false);
        let b = random_element(&mut rng, &s, 3, false);
        let ab = a.multiply(&b).unwrap();
        for &h in &[1.0, 0.5, 0.125, 0.7] {
            let lhs = ab.evaluate_at(h);
            let rhs = a.evaluate_at(h).multiply(&b.evaluate_at(h)).unwrap();
            let scale = 1.0 + lhs.norm_bounds().1;
            assert!(lhs.max_coefficient_distance(&rhs) <= 1e-12 * scale);
            let inv = a.involution().evaluate_at(h);
            assert!(inv.max_coefficient_distance(&a.evaluate_at(h).involution()) <= 1e-13 * scale);
        }
        assert_eq!(
            ab.evaluate_at_zero(),
            a.evaluate_at_zero().multiply_classical(&b.evaluate_at_zero()).unwrap()
        );
    }
}

#[test]
fn norm_bound_examples() {
    let s = standard_space(1);
    let c = CoeffExpr::term(int(3), int(4), &int(0), int(0));
    let a = WeylElement::monomial(&s, &v(&[1, 2]), c).unwrap();
    assert_eq!(a.norm_bounds(0.3), (5.0, 5.0));
    assert_eq!(WeylElement::zero(&s).norm_bounds(0.0), (0.0, 0.0));
    let sum = WeylElement::generator(&s, &v(&[1, 0]))
        .unwrap()
        .add(&WeylElement::generator(&s, &v(&[0, 1])).unwrap())
        .unwrap();
    assert_eq!(sum.norm_bounds(0.0), (1.0, 2.0));
}

#[test]
fn single_term_c_star_identity_holds_exactly() {
    let mut rng = seeded(19);
    let s = random_space(&mut rng, 1);
    for _ in 0..100 {
        let a = random_element(&mut rng, &s, 1, false);
        let Some(c) = a.terms().next().map(|(_, c)| c.clone()) else {
            continue;
        };
        let aa = a.involution().multiply(&a).unwrap();
        assert_eq!(aa.len(), 1);
        assert!(aa.coefficient(&s.zero_vector()).is_some());
        assert_eq!(aa.coefficient(&s.zero_vector()).unwrap(), &c.abs_squared());
        for &h in &[0.0, 0.25, 1.0] {
            let (lo, hi) = a.norm_bounds(h);
            let (lo2, hi2) = aa.norm_bounds(h);
            assert!((lo2 - lo * lo).abs() < 1e-12 && (hi2 - hi * hi).abs() < 1e-12);
        }
    }
}

#[test]
fn sup_norm_examples() {
    let s = standard_space(1);
    let c = CoeffExpr::term(rat(3, 5), rat(4, 5), &rat(1, 3), int(0));
    let single = WeylElement::monomial(&s, &v(&[2, 1]), c).unwrap();
    assert!((single.classical_sup_norm_estimate(16).unwrap() - 1.0).abs() <= 1e-9);

    let wf = WeylElement::generator(&s, &v(&[1, 0])).unwrap();
    let wg = WeylElement::generator(&s, &v(&[0, 1])).unwrap();
    let indep = wf.add(&wg).unwrap();
    assert!((indep.classical_sup_norm_estimate(64).unwrap() - 2.0).abs() <= 1e-9);

    let w3f = WeylElement::generator(&s, &v(&[3, 0])).unwrap();
    let harmonics = wf.add(&w3f).unwrap();
    assert!((harmonics.classical_sup_norm_estimate(64).unwrap() - 2.0).abs() <= 1e-9);
}

/// Brute-force oracle: scan `t` on a fine grid for a one-frequency-axis
/// element with phases chosen so the maximum is not at `t = 0`.
#[test]
fn sup_norm_matches_one_dimensional_scan() {
    let s = standard_space(1);
    let f = v(&[1, 0]);
    let f3 = v(&[3, 0]);
    let a = WeylElement::from_terms(
        &s,
        [
            (f.clone(), CoeffExpr::one()),
            (f3, CoeffExpr::phase(&rat(1, 2), int(0))),
        ],
    )
    .unwrap();
    let mut brute = 0.0f64;
    let steps = 200_000;
    for k in 0..steps {
        let t = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
        let val = Complex64::from_polar(1.0, t) + Complex64::i() * Complex64::from_polar(1.0, 3.0 * t);
        brute = brute.max(val.norm());
    }
    let est = a.classical_sup_norm_estimate(1 << 14).unwrap();
    assert!((est - brute).abs() < 1e-6, "{est} vs {brute}");
}

#[test]
fn sup_norm_is_monotone_and_within_bounds() {
    let mut rng = seeded(23);
    let s = random_space(&mut rng, 1);
    for _ in 0..30 {
        let a = random_element(&mut rng, &s, 3, true);
        let (lo, hi) = a.norm_bounds(0.0);
        let mut prev = 0.0;
        for res in [4, 8, 16, 32] {
            let est = a.classical_sup_norm_estimate(res).unwrap();
            assert!(est + 1e-12 >= prev);
            assert!(est + 1e-12 >= lo && est <= hi + 1e-12);
            prev = est;
        }
    }
}

#[test]
fn sup_norm_requires_hbar_free_input() {
    let s = standard_space(1);
    let a = WeylElement::monomial(&s, &v(&[1, 0]), CoeffExpr::hbar_phase(int(1))).unwrap();
    assert_eq!(a.classical_sup_norm_estimate(8), Err(WeylError::HbarDependent));
}

#[test]
fn json_round_trip_is_bit_exact() {
    let mut rng = seeded(29);
    for n in 1..=2 {
        let s = random_space(&mut rng, n);
        for _ in 0..100 {
            let a = random_element(&mut rng, &s, 4, false);
            let b = random_element(&mut rng, &s, 4, false);
            let ab = a.multiply(&b).unwrap();
            let text = ab.to_json();
            let back = WeylElement::from_json(&text).unwrap();
            assert_eq!(back, ab);
            assert_eq!(back.to_json(), text);
        }
    }
}

#[test]
fn space_mismatch_is_an_error() {
    let a = WeylElement::unit(&standard_space(1));
    let b = WeylElement::unit(&standard_space(2));
    assert_eq!(a.multiply(&b), Err(WeylError::SpaceMismatch));
}
