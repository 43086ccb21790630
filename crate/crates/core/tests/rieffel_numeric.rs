use num_complex::Complex64;
use quantaequiv_core::category::{check_category_laws, check_equivalence, check_functor_laws, NaturalTransformation};
use quantaequiv_core::functors::Fiber;
use quantaequiv_core::rieffel::convergence::{convergence_study, ConvergenceError};
use quantaequiv_core::rieffel::profiles::{gaussian, gaussian_star, gaussian_star_pair, round_gaussian, window, windowed_coordinate};
use quantaequiv_core::rieffel::*;

const PI: f64 = std::f64::consts::PI;

fn grid256() -> Grid2n {
    Grid2n::new(1, 256, 20.0).unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Sup distance restricted to `|z_a| < r`.
fn interior_distance(f: &GridFunction, g: &GridFunction, r: f64) -> f64 {
    let grid = f.grid();
    let dim = grid.dim();
    f.samples()
        .iter()
        .zip(g.samples())
        .enumerate()
        .filter(|(i, _)| grid.point(*i)[..dim].iter().all(|x| x.abs() < r))
        .fold(0.0, |m, (_, (a, b))| m.max((a - b).norm()))
}

const F: ([f64; 2], [f64; 2]) = ([0.5, -0.3], [1.0, 0.8]);
const G: ([f64; 2], [f64; 2]) = ([-0.4, 0.6], [0.9, 1.1]);
const H: ([f64; 2], [f64; 2]) = ([0.2, 0.1], [0.7, 0.9]);

fn make(grid: &Grid2n, bump: ([f64; 2], [f64; 2])) -> GridFunction {
    gaussian(grid, &bump.0, &bump.1)
}

// ---------- grid ----------

#[test]
fn grids_reject_bad_parameters() {
    assert!(Grid2n::new(3, 64, 1.0).is_err());
    assert!(Grid2n::new(1, 16, 1.0).is_err());
    assert!(Grid2n::new(1, 48, 1.0).is_err());
    assert!(Grid2n::new(1, 64, 0.0).is_err());
    assert!(Grid2n::new(1, 64, f64::NAN).is_err());
    let g = Grid2n::new(2, 32, 16.0).unwrap();
    assert_eq!(g.len(), 32usize.pow(4));
    assert!(GridFunction::new(g, vec![c(0.0); 3]).is_err());
}

#[test]
fn binary_format_round_trips_bit_exactly() {
    let grid = Grid2n::new(1, 32, 12.0).unwrap();
    let f = GridFunction::from_fn(grid, |z| Complex64::new((-z[0] * z[0]).exp() / 3.0, z[1].sin() * 1e-300));
    let bytes = f.to_bytes();
    assert_eq!(bytes.len(), 24 + 16 * 32 * 32);
    assert_eq!(f64::from_le_bytes(bytes[0..8].try_into().unwrap()), 1.0);
    assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 32.0);
    assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 12.0);
    let back = GridFunction::from_bytes(&bytes).unwrap();
    assert_eq!(back, f);

    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("gauss");
    f.write(&stem).unwrap();
    assert_eq!(GridFunction::read(&stem).unwrap(), f);
    let desc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    assert_eq!(desc["points_per_axis"], 32);
    assert_eq!(desc["axes"], serde_json::json!(["x1", "p1"]));

    let other = GridFunction::constant(Grid2n::new(1, 64, 12.0).unwrap(), c(1.0));
    std::fs::write(stem.with_extension("bin"), other.to_bytes()).unwrap();
    assert!(GridFunction::read(&stem).is_err());
    assert!(GridFunction::from_bytes(&bytes[..100]).is_err());
}

// ---------- translations and derivatives ----------

#[test]
fn translation_examples() {
    let grid = grid256();
    let f = round_gaussian(&grid, &[0.0, 0.0], 1.0);
    assert!(translate(&f, &[0.0, 0.0]).unwrap().sup_distance(&f).unwrap() <= 1e-14);

    // tau_x f = f(. + x): the bump moves to -x.
    let shifted = translate(&f, &[1.0, 0.0]).unwrap();
    let analytic = round_gaussian(&grid, &[-1.0, 0.0], 1.0);
    assert!(shifted.sup_distance(&analytic).unwrap() <= 1e-10);

    let x = [0.37, -1.3];
    let back = translate(&translate(&f, &x).unwrap(), &[-0.37, 1.3]).unwrap();
    assert!(back.sup_distance(&f).unwrap() <= 1e-12);

    let y = [-0.8, 0.45];
    let two = translate(&translate(&f, &x).unwrap(), &y).unwrap();
    let one = translate(&f, &[x[0] + y[0], x[1] + y[1]]).unwrap();
    assert!(two.sup_distance(&one).unwrap() <= 1e-12);
    assert!(translate(&f, &[1.0]).is_err());
}

#[test]
fn lie_derivative_examples() {
    let grid = grid256();
    let l = grid.extent();
    let one = GridFunction::constant(grid, c(1.0));
    assert!(lie_derivative(&one, &[1.0, 0.3]).unwrap().sup_norm() <= 1e-12);

    let s = GridFunction::from_real_fn(grid, |z| (2.0 * PI * z[0] / l).sin());
    let ds = lie_derivative(&s, &[1.0, 0.0]).unwrap();
    let exact = GridFunction::from_real_fn(grid, |z| 2.0 * PI / l * (2.0 * PI * z[0] / l).cos());
    assert!(ds.sup_distance(&exact).unwrap() <= 1e-10);

    let f = make(&grid, F);
    let (x, y) = ([0.3, -1.1], [0.9, 0.4]);
    let sum = lie_derivative(&f, &[1.2, -0.7]).unwrap();
    let parts = lie_derivative(&f, &x).unwrap().add(&lie_derivative(&f, &y).unwrap()).unwrap();
    assert!(sum.sup_distance(&parts).unwrap() <= 1e-12);
}

/// Fourth-order central differences of an analytic function.
fn fd_partial(f: &dyn Fn(f64, f64) -> f64, x: f64, p: f64, axis: usize) -> f64 {
    let h = 1e-3;
    let at = |t: f64| if axis == 0 { f(x + t, p) } else { f(x, p + t) };
    (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
}

fn analytic(bump: ([f64; 2], [f64; 2])) -> impl Fn(f64, f64) -> f64 {
    move |x, p| (-0.5 * (((x - bump.0[0]) / bump.1[0]).powi(2) + ((p - bump.0[1]) / bump.1[1]).powi(2))).exp()
}

#[test]
fn poisson_bracket_examples() {
    let grid = grid256();
    let f = make(&grid, F);
    let g = make(&grid, G);
    assert!(poisson_bracket_grid(&f, &f).unwrap().sup_norm() <= 1e-12);

    let x = windowed_coordinate(&grid, 0, 7.0, 0.5);
    let p = windowed_coordinate(&grid, 1, 7.0, 0.5);
    let one = GridFunction::constant(grid, c(1.0));
    assert!(interior_distance(&poisson_bracket_grid(&x, &p).unwrap(), &one, 3.0) <= 1e-6);

    let (fa, ga) = (analytic(F), analytic(G));
    let oracle = GridFunction::from_real_fn(grid, |z| {
        fd_partial(&fa, z[0], z[1], 0) * fd_partial(&ga, z[0], z[1], 1)
            - fd_partial(&fa, z[0], z[1], 1) * fd_partial(&ga, z[0], z[1], 0)
    });
    assert!(poisson_bracket_grid(&f, &g).unwrap().sup_distance(&oracle).unwrap() <= 1e-8);

    let other = GridFunction::constant(Grid2n::new(1, 64, 20.0).unwrap(), c(1.0));
    assert!(matches!(poisson_bracket_grid(&f, &other), Err(RieffelError::GridMismatch)));
}

#[test]
fn poisson_bracket_properties() {
    let grid = grid256();
    let (f, g, h) = (make(&grid, F), make(&grid, G), make(&grid, H));
    let fg = poisson_bracket_grid(&f, &g).unwrap();
    let gf = poisson_bracket_grid(&g, &f).unwrap();
    assert!(fg.add(&gf).unwrap().sup_norm() <= 1e-15);

    let pb = |a: &GridFunction, b: &GridFunction| poisson_bracket_grid(a, b).unwrap();
    let jacobi = pb(&f, &pb(&g, &h)).add(&pb(&g, &pb(&h, &f))).unwrap().add(&pb(&h, &pb(&f, &g))).unwrap();
    assert!(jacobi.sup_norm() <= 1e-6);

    let leibniz = pb(&f, &g.mul(&h).unwrap())
        .sub(&pb(&f, &g).mul(&h).unwrap())
        .unwrap()
        .sub(&g.mul(&pb(&f, &h)).unwrap())
        .unwrap();
    assert!(leibniz.sup_norm() <= 1e-8);
}

// ---------- Moyal product ----------

/// Trapezoid quadrature of the two one-dimensional factors of the star
/// product of axis-aligned Gaussians, with analytic Fourier transforms.
fn quadrature_star(f: ([f64; 2], [f64; 2]), g: ([f64; 2], [f64; 2]), hbar: f64, x: f64, p: f64) -> Complex64 {
    let ([a, cc], [s, u]) = f;
    let ([d, b], [v, t]) = g;
    let ft = |w: f64, centre: f64, k: f64| {
        Complex64::from_polar(w / (2.0 * PI).sqrt() * (-0.5 * w * w * k * k).exp(), -k * centre)
    };
    let gauss = |y: f64, centre: f64, w: f64| (-0.5 * ((y - centre) / w).powi(2)).exp();
    let integrate = |w: f64, integrand: &dyn Fn(f64) -> Complex64| {
        let cutoff = 10.0 / w;
        let steps = 4000;
        let dk = 2.0 * cutoff / steps as f64;
        (0..=steps)
            .map(|i| {
                let k = -cutoff + i as f64 * dk;
                let weight = if i == 0 || i == steps { 0.5 } else { 1.0 };
                integrand(k) * weight
            })
            .sum::<Complex64>()
            * dk
    };
    let i1 = integrate(s, &|k| ft(s, a, k) * Complex64::from_polar(1.0, k * x) * gauss(p - 0.5 * hbar * k, b, t));
    let i2 = integrate(u, &|k| ft(u, cc, k) * Complex64::from_polar(1.0, k * p) * gauss(x + 0.5 * hbar * k, d, v));
    i1 * i2
}

#[test]
fn closed_form_matches_quadrature() {
    for hbar in [0.1, 0.4, 1.0] {
        for (x, p) in [(0.0, 0.0), (0.7, -0.4), (-1.3, 1.1), (2.0, 0.5), (-0.2, -2.2)] {
            let closed = gaussian_star_pair(
                [(F.0[0], F.1[0]), (F.0[1], F.1[1])],
                [(G.0[0], G.1[0]), (G.0[1], G.1[1])],
                hbar,
                x,
                p,
            );
            let quad = quadrature_star(F, G, hbar, x, p);
            assert!((closed - quad).norm() <= 1e-12, "hbar={hbar} at ({x},{p}): {closed} vs {quad}");
        }
    }
}

#[test]
fn gaussian_star_gaussian_matches_oracle() {
    let grid = grid256();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let fg = moyal_product(&f, &g, 0.1).unwrap();
    let oracle = gaussian_star(&grid, (&F.0, &F.1), (&G.0, &G.1), 0.1);
    let rel = fg.sup_distance(&oracle).unwrap() / oracle.sup_norm();
    assert!(rel <= 1e-6, "relative sup error {rel:e}");

    let mut worst: f64 = 0.0;
    for idx in (0..grid.len()).step_by(997) {
        let z = grid.point(idx);
        worst = worst.max((fg.samples()[idx] - quadrature_star(F, G, 0.1, z[0], z[1])).norm());
    }
    assert!(worst / oracle.sup_norm() <= 1e-6);
}

#[test]
fn unit_window_is_a_unit() {
    let grid = grid256();
    let f = make(&grid, F);
    let w = window(&grid, 7.0, 0.5);
    assert!(interior_distance(&moyal_product(&f, &w, 0.1).unwrap(), &f, 5.0) <= 1e-8);
    assert!(interior_distance(&moyal_product(&w, &f, 0.1).unwrap(), &f, 5.0) <= 1e-8);
}

#[test]
fn first_order_expansion_and_semiclassical_limit() {
    let grid = grid256();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let pb = poisson_bracket_grid(&f, &g).unwrap();
    let mut last = f64::INFINITY;
    for hbar in [0.1, 0.01, 0.001] {
        let fg = moyal_product(&f, &g, hbar).unwrap();
        let gf = moyal_product(&g, &f, hbar).unwrap();
        let first = f.mul(&g).unwrap().add(&pb.scale(Complex64::new(0.0, 0.5 * hbar))).unwrap();
        assert!(fg.sup_distance(&first).unwrap() <= hbar * hbar);
        let limit = fg.sub(&gf).unwrap().scale(Complex64::new(0.0, -1.0 / hbar));
        let err = limit.sup_distance(&pb).unwrap();
        assert!(err < last);
        last = err;
    }
    assert!(last <= 1e-6);
}

#[test]
fn moyal_is_associative_and_reverses_under_conjugation() {
    let grid = grid256();
    let (f, g, h) = (make(&grid, F), make(&grid, G), make(&grid, H));
    let g = g.mul(&GridFunction::from_fn(grid, |z| Complex64::from_polar(1.0, 0.3 * z[0]))).unwrap();
    let star = |a: &GridFunction, b: &GridFunction| moyal_product(a, b, 0.1).unwrap();
    let left = star(&star(&f, &g), &h);
    let right = star(&f, &star(&g, &h));
    assert!(left.sup_distance(&right).unwrap() / left.sup_norm() <= 1e-6);

    let lhs = star(&f, &g).conj();
    let rhs = star(&g.conj(), &f.conj());
    assert!(lhs.sup_distance(&rhs).unwrap() <= 1e-10);
}

#[test]
fn moyal_detectors_and_errors() {
    let grid = grid256();
    let f = make(&grid, F);
    assert!(matches!(moyal_product(&f, &f, 0.0), Err(RieffelError::InvalidHbar(_))));
    assert!(matches!(moyal_product(&f, &f, -0.1), Err(RieffelError::InvalidHbar(_))));

    let wide = round_gaussian(&grid, &[0.0, 0.0], 3.0);
    assert!(matches!(moyal_product(&wide, &f, 0.1), Err(RieffelError::Leakage { .. })));

    let coarse = Grid2n::new(1, 32, 20.0).unwrap();
    let narrow = round_gaussian(&coarse, &[0.0, 0.0], 0.3);
    assert!(matches!(moyal_product(&narrow, &narrow, 0.1), Err(RieffelError::Aliasing { .. })));

    let other = round_gaussian(&coarse, &[0.0, 0.0], 1.0);
    assert!(matches!(moyal_product(&f, &other, 0.1), Err(RieffelError::GridMismatch)));
}

#[test]
fn moyal_is_deterministic() {
    let grid = grid256();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let a = moyal_product(&f, &g, 0.2).unwrap();
    let b = moyal_product(&f, &g, 0.2).unwrap();
    assert_eq!(a.to_bytes(), b.to_bytes());
}

#[test]
fn four_dimensional_star_product_with_relaxed_options() {
    let grid = Grid2n::new(2, 32, 16.0).unwrap();
    let fc = [0.3, -0.2, 0.1, 0.2];
    let gc = [-0.2, 0.1, 0.3, -0.1];
    let w = [1.5; 4];
    let f = gaussian(&grid, &fc, &w);
    let g = gaussian(&grid, &gc, &w);
    let fg = moyal_product_with(&f, &g, 0.1, &MoyalOptions::relaxed()).unwrap();
    let oracle = gaussian_star(&grid, (&fc, &w), (&gc, &w), 0.1);
    let rel = fg.sup_distance(&oracle).unwrap() / oracle.sup_norm();
    assert!(rel <= 1e-4, "relative error {rel:e}");
    assert!(matches!(moyal_product(&f, &g, 0.1), Err(RieffelError::Leakage { .. })));
}

// ---------- defects ----------

#[test]
fn disjoint_supports_have_no_defect() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let f = round_gaussian(&grid, &[-4.5, -4.5], 0.5);
    let g = round_gaussian(&grid, &[4.5, 4.5], 0.5);
    assert!(dirac_defect_grid(&f, &g, 0.1, &opts).unwrap() <= 1e-8);
    assert!(von_neumann_defect_grid(&f, &g, 0.1, &opts).unwrap() <= 1e-8);
}

#[test]
fn defect_orders_along_the_default_schedule() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let schedule = [0.4, 0.2, 0.1, 0.05];
    let dirac = convergence_study(&schedule, |h| dirac_defect_grid(&f, &g, h, &opts)).unwrap();
    let slope = dirac.slope().unwrap();
    assert!((1.8..=2.2).contains(&slope), "dirac slope {slope}");
    assert!(dirac.rows[0].defect > dirac.rows[3].defect);
    let vn = convergence_study(&schedule, |h| von_neumann_defect_grid(&f, &g, h, &opts)).unwrap();
    let slope = vn.slope().unwrap();
    assert!((0.8..=1.2).contains(&slope), "von Neumann slope {slope}");

    let csv = dirac.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("hbar,defect,slope_window"));
    assert!(lines.next().unwrap().ends_with(','));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn commuting_pair_saturates() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let f = make(&grid, F);
    let t = convergence_study(&[0.4, 0.2, 0.1, 0.05], |h| dirac_defect_grid(&f, &f, h, &opts)).unwrap();
    assert!(t.is_saturated());
    assert!(t.slope().is_none());
    assert!(matches!(
        convergence_study(&[0.1, 0.2, 0.3, 0.4], |h| dirac_defect_grid(&f, &f, h, &opts)),
        Err(ConvergenceError::InvalidSchedule)
    ));
    assert!(matches!(
        convergence_study(&[0.4, 0.2, 0.1], |h| dirac_defect_grid(&f, &f, h, &opts)),
        Err(ConvergenceError::InvalidSchedule)
    ));
}

/// For real `f`, `f*f - f^2 = -(hbar^2/8)(2 f_xx f_pp - 2 f_xp^2) + O(hbar^4)`
/// and is real: the odd orders cancel.
#[test]
fn self_product_defect_is_second_order_and_real() {
    let grid = grid256();
    let ([a, cc], [s, u]) = F;
    let f = make(&grid, F);
    let f_an = analytic(F);
    for hbar in [0.1, 0.05] {
        let oracle = GridFunction::from_real_fn(grid, |z| {
            let (dx, dp) = (z[0] - a, z[1] - cc);
            let v = f_an(z[0], z[1]);
            let fxx = (dx * dx / s.powi(4) - 1.0 / (s * s)) * v;
            let fpp = (dp * dp / u.powi(4) - 1.0 / (u * u)) * v;
            let fxp = dx * dp / (s * s * u * u) * v;
            -hbar * hbar / 8.0 * (2.0 * fxx * fpp - 2.0 * fxp * fxp)
        });
        let defect = moyal_product(&f, &f, hbar).unwrap().sub(&f.mul(&f).unwrap()).unwrap();
        let imag = defect.samples().iter().fold(0.0_f64, |m, v| m.max(v.im.abs()));
        assert!(imag <= 1e-13);
        let rel = defect.sup_distance(&oracle).unwrap() / oracle.sup_norm();
        assert!(rel <= 2.0 * hbar * hbar, "hbar={hbar}: {rel:e}");
    }
}

// ---------- affine maps ----------

fn diag2() -> AffineSymplecticMap {
    AffineSymplecticMap::unchecked(vec![vec![2.0, 0.0], vec![0.0, 2.0]], vec![0.0, 0.0]).unwrap()
}

#[test]
fn affine_maps_are_validated() {
    assert!(matches!(
        AffineSymplecticMap::new(vec![vec![2.0, 0.0], vec![0.0, 2.0]], vec![0.0, 0.0]),
        Err(RieffelError::NotSymplectic(_))
    ));
    assert!(AffineSymplecticMap::new(vec![vec![2.0, 0.0], vec![0.0, 0.5]], vec![1.0, 0.0]).is_ok());
    let r = AffineSymplecticMap::rotation(2, 0.3);
    assert!(r.symplectic_residual() <= 1e-15);
    let composite = r.after(&r.inverse().unwrap());
    let id = AffineSymplecticMap::identity(4);
    for (row, e) in composite.linear().iter().zip(id.linear()) {
        for (x, y) in row.iter().zip(e) {
            assert!((x - y).abs() <= 1e-15);
        }
    }
    assert!(AffineSymplecticMap::unchecked(vec![vec![1.0]], vec![0.0]).is_err());
}

#[test]
fn pullback_examples() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let f = make(&grid, F);
    let id = AffineSymplecticMap::identity(2);
    assert!(pullback(&f, &id, &opts).unwrap().sup_distance(&f).unwrap() <= 1e-12);

    let b = vec![0.7, -1.2];
    let moved = pullback(&f, &AffineSymplecticMap::translation(b.clone()), &opts).unwrap();
    assert!(moved.sup_distance(&translate(&f, &b).unwrap()).unwrap() <= 1e-10);

    let radial = round_gaussian(&grid, &[0.0, 0.0], 1.0);
    let turned = pullback(&radial, &AffineSymplecticMap::rotation(1, PI / 2.0), &opts).unwrap();
    assert!(turned.sup_distance(&radial).unwrap() <= 1e-8);

    let g = make(&grid, G);
    let phi = AffineSymplecticMap::new(vec![vec![0.8, 0.6], vec![-0.6, 0.8]], vec![0.2, 0.1]).unwrap();
    let lhs = pullback(&f.mul(&g).unwrap(), &phi, &opts).unwrap();
    let rhs = pullback(&f, &phi, &opts).unwrap().mul(&pullback(&g, &phi, &opts).unwrap()).unwrap();
    assert!(lhs.sup_distance(&rhs).unwrap() <= 1e-8);

    let far = AffineSymplecticMap::translation(vec![9.0, 0.0]);
    assert!(matches!(pullback(&f, &far, &opts), Err(RieffelError::SupportEscapes)));
}

#[test]
fn star_products_are_preserved_exactly_by_symplectic_maps() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let id = AffineSymplecticMap::identity(2);
    assert!(morphism_star_defect(&id, &f, &g, 0.1, &opts).unwrap() <= 1e-12);
    let rot = AffineSymplecticMap::rotation(1, 0.7);
    assert!(morphism_star_defect(&rot, &f, &g, 0.1, &opts).unwrap() <= 1e-3);
    let f = gaussian(&grid, &[0.6, -0.3], &[0.5, 0.5]);
    let g = gaussian(&grid, &[-0.6, 0.3], &[0.5, 0.5]);
    assert!(morphism_star_defect(&rot, &f, &g, 0.1, &opts).unwrap() <= 1e-3);
    let control = morphism_star_defect(&diag2(), &f, &g, 0.1, &opts).unwrap();
    assert!(control >= 1e-1, "control defect {control}");
}

#[test]
fn equivariance_examples() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let f = make(&grid, F);
    let x = [1.0, 0.0];
    assert!(equivariance_defect(&AffineSymplecticMap::identity(2), &f, &x, &opts).unwrap() <= 1e-12);
    let shift = AffineSymplecticMap::translation(vec![0.4, -0.3]);
    assert!(equivariance_defect(&shift, &f, &[0.3, 0.8], &opts).unwrap() <= 1e-10);
    let rot = AffineSymplecticMap::rotation(1, 0.9);
    assert!(equivariance_defect(&rot, &f, &x, &opts).unwrap() <= 1e-8);
}

// ---------- Weyl transform ----------

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    (0..=n)
        .map(|j| {
            let binom = factorial(n + k) / (factorial(n - j) * factorial(k + j));
            (-1.0_f64).powi(j as i32) * binom * x.powi(j as i32) / factorial(j)
        })
        .sum()
}

/// `<m|D(alpha)|n>` from the textbook formula.
fn displacement_entry(m: usize, n: usize, alpha: Complex64) -> Complex64 {
    let x = alpha.norm_sqr();
    let e = (-0.5 * x).exp();
    if m >= n {
        alpha.powi((m - n) as i32) * (factorial(n) / factorial(m)).sqrt() * e * laguerre(n, m - n, x)
    } else {
        (-alpha.conj()).powi((n - m) as i32) * (factorial(m) / factorial(n)).sqrt() * e * laguerre(m, n - m, x)
    }
}

#[test]
fn displacement_blocks_match_closed_form() {
    for alpha in [Complex64::new(0.3, -0.8), Complex64::new(-1.2, 1.3), Complex64::new(0.0, 0.0)] {
        let d = displacement_matrix(40, alpha);
        for m in 0..10 {
            for n in 0..10 {
                assert!((d.get(m, n) - displacement_entry(m, n, alpha)).norm() <= 1e-12);
            }
        }
    }
    let (a, b) = (Complex64::new(0.5, 1.1), Complex64::new(-0.9, 0.4));
    let big = 160;
    let lhs = displacement_matrix(big, a).mul(&displacement_matrix(big, b));
    let phase = ((a * b.conj() - a.conj() * b) * 0.5).exp();
    let rhs = displacement_matrix(big, a + b).scale(phase);
    for m in 0..20 {
        for n in 0..20 {
            assert!((lhs.get(m, n) - rhs.get(m, n)).norm() <= 1e-12);
        }
    }
}

#[test]
fn weyl_transform_examples() {
    let grid = grid256();
    let no_check = WeylTransformOptions {
        trace_tolerance: None,
        ..WeylTransformOptions::default()
    };
    let one = weyl_transform_with(&window(&grid, 7.0, 0.5), 0.1, 32, &no_check).unwrap();
    assert!(one.sub(&WeylMatrix::identity(32)).max_abs() <= 1e-6);
    assert!(matches!(
        weyl_transform(&window(&grid, 7.0, 0.5), 0.1, 32),
        Err(RieffelError::Truncation { .. })
    ));

    let x = weyl_transform(&windowed_coordinate(&grid, 0, 7.0, 0.5), 0.1, 32).unwrap();
    assert!(x.sub(&position_matrix(32, 0.1)).max_abs() <= 1e-6);
    let p = weyl_transform(&windowed_coordinate(&grid, 1, 7.0, 0.5), 0.1, 32).unwrap();
    assert!(p.sub(&momentum_matrix(32, 0.1)).max_abs() <= 1e-6);

    let f = make(&grid, F);
    assert!(weyl_transform(&f, 0.1, 48).unwrap().hermiticity_defect() <= 1e-12);
    assert!(weyl_transform(&f, 0.1, 8).is_err());
    let n2 = GridFunction::constant(Grid2n::new(2, 32, 16.0).unwrap(), c(0.0));
    assert!(matches!(weyl_transform(&n2, 0.1, 32), Err(RieffelError::Unsupported(1))));
}

#[test]
fn canonical_commutator_holds_away_from_the_cutoff() {
    let q = position_matrix(40, 0.1);
    let p = momentum_matrix(40, 0.1);
    let comm = q.mul(&p).sub(&p.mul(&q));
    for i in 0..39 {
        assert!((comm.get(i, i) - Complex64::new(0.0, 0.1)).norm() <= 1e-14);
    }
}

#[test]
fn weyl_transform_intertwines_star_and_operator_products() {
    let grid = grid256();
    let opts = MoyalOptions::default();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let residuals: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| homomorphism_residual(&f, &g, 0.1, n, &opts).unwrap())
        .collect();
    assert!(residuals[1] <= 1e-3, "{residuals:?}");
    assert!(residuals[0] > residuals[1] && residuals[1] > residuals[2], "{residuals:?}");
}

#[test]
fn wide_functions_trip_the_truncation_detector() {
    let grid = Grid2n::new(1, 128, 40.0).unwrap();
    let wide = round_gaussian(&grid, &[0.0, 0.0], 3.0);
    assert!(matches!(weyl_transform(&wide, 0.1, 16), Err(RieffelError::Truncation { .. })));
}

// ---------- the Rieffel categories ----------

struct ShiftedEta;

impl NaturalTransformation<RClass> for ShiftedEta {
    fn name(&self) -> String {
        "eta*".into()
    }
    fn component(&self, x: &RClassObject) -> Option<AffineArrow> {
        let mut shift = vec![quantaequiv_core::symplectic::rat(0, 1); 2 * x.n];
        shift[0] = quantaequiv_core::symplectic::rat(1, 2);
        Some(
            AffineArrow::new(
                x.n,
                x.n,
                quantaequiv_core::symplectic::RationalMatrix::identity(2 * x.n),
                quantaequiv_core::symplectic::RationalVector::new(shift),
                Fiber::Classical,
            )
            .unwrap(),
        )
    }
    fn inverse_component(&self, x: &RClassObject) -> Option<AffineArrow> {
        Some(AffineArrow::identity(x.n, Fiber::Classical))
    }
}

#[test]
fn rieffel_categories_form_an_equivalence() {
    let classical = rieffel_chain_samples::<RClass>(21, 15, 3, Fiber::Classical);
    let quantum = rieffel_chain_samples::<RQuant>(22, 15, 3, Fiber::Quantum);
    assert!(check_category_laws(&RClass, &classical).unwrap().passed());
    assert!(check_category_laws(&RQuant, &quantum).unwrap().passed());
    assert!(check_functor_laws(&RieffelQuantizationFunctor, &RClass, &RQuant, &classical).unwrap().passed());
    assert!(check_functor_laws(&RieffelLimitFunctor, &RQuant, &RClass, &quantum).unwrap().passed());
    let eq = check_equivalence(
        &RClass, &RQuant, &RieffelQuantizationFunctor, &RieffelLimitFunctor,
        &RieffelEta, &RieffelPhi, &classical, &quantum,
    )
    .unwrap();
    assert!(eq.passed());
    let bad = check_equivalence(
        &RClass, &RQuant, &RieffelQuantizationFunctor, &RieffelLimitFunctor,
        &ShiftedEta, &RieffelPhi, &classical, &quantum,
    )
    .unwrap();
    assert!(!bad.passed());
}

#[test]
fn exact_arrows_act_on_grids_as_star_homomorphisms() {
    use quantaequiv_core::symplectic::{rat, RationalMatrix, RationalVector};
    let shear = RationalMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 2)], vec![rat(0, 1), rat(1, 1)]]).unwrap();
    let arrow = AffineArrow::new(1, 1, shear, RationalVector::new(vec![rat(1, 4), rat(-1, 4)]), Fiber::Classical)
        .unwrap();
    let composite = arrow.then(&AffineArrow::identity(1, Fiber::Classical)).unwrap();
    assert_eq!(composite, arrow);
    let phi = arrow.to_numeric().unwrap();
    assert!(phi.symplectic_residual() <= 1e-15);
    let grid = grid256();
    let opts = MoyalOptions::default();
    let (f, g) = (make(&grid, F), make(&grid, G));
    let d = morphism_star_defect(&phi, &f, &g, 0.1, &opts).unwrap();
    assert!(d <= 1e-3, "defect {d}");
}
