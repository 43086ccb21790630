use num_complex::Complex64;
use proptest::prelude::*;
use quantaequiv_core::cyclotomic::Cyclotomic;
use quantaequiv_core::symplectic::rat;

fn number() -> impl Strategy<Value = (Cyclotomic, Complex64)> {
    prop::collection::vec(((-6i64..=6, 1i64..=4), (0i64..60, prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 10, 12, 15, 30]))), 0..5)
        .prop_map(|terms| {
            let mut z = Cyclotomic::zero();
            let mut w = Complex64::new(0.0, 0.0);
            for ((n, d), (k, m)) in terms {
                let p = rat(k, m);
                z = z.add(&Cyclotomic::root_of_unity(&p).scale(&rat(n, d)));
                let angle = std::f64::consts::PI * k as f64 / m as f64;
                w += Complex64::from_polar(n as f64 / d as f64, angle);
            }
            (z, w)
        })
}

proptest! {
    #[test]
    fn arithmetic_agrees_with_floating_point((a, wa) in number(), (b, wb) in number()) {
        prop_assert!((a.to_complex() - wa).norm() < 1e-9);
        prop_assert!((a.mul(&b).to_complex() - wa * wb).norm() < 1e-8);
        prop_assert!((a.add(&b).to_complex() - (wa + wb)).norm() < 1e-9);
        prop_assert!((a.conj().to_complex() - wa.conj()).norm() < 1e-9);
    }

    #[test]
    fn zero_test_agrees_with_floating_point((a, _) in number(), (b, _) in number()) {
        let d = a.sub(&b);
        // Canonical: structurally equal iff numerically equal.
        prop_assert_eq!(d.is_zero(), (a.to_complex() - b.to_complex()).norm() < 1e-9);
        prop_assert_eq!(a == b, d.is_zero());
    }

    #[test]
    fn ring_axioms((a, _) in number(), (b, _) in number(), (c, _) in number()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }
}
