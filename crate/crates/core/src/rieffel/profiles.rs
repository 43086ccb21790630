//! Smooth, rapidly decaying test functions.

use num_complex::Complex64;

use super::{Grid2n, GridFunction};

/// `exp(-sum_a (z_a - c_a)^2 / (2 w_a^2))`.
pub fn gaussian(grid: &Grid2n, center: &[f64], widths: &[f64]) -> GridFunction {
    assert_eq!(center.len(), grid.dim());
    assert_eq!(widths.len(), grid.dim());
    GridFunction::from_real_fn(*grid, |z| {
        let q: f64 = z
            .iter()
            .zip(center)
            .zip(widths)
            .map(|((x, c), w)| ((x - c) / w).powi(2))
            .sum();
        (-0.5 * q).exp()
    })
}

/// Isotropic Gaussian of width `w`.
pub fn round_gaussian(grid: &Grid2n, center: &[f64], w: f64) -> GridFunction {
    gaussian(grid, center, &vec![w; grid.dim()])
}

/// One-dimensional plateau: about 1 on `|x| < half_width - 3 edge`, about 0
/// beyond `half_width + 3 edge`.
pub fn plateau(x: f64, half_width: f64, edge: f64) -> f64 {
    0.5 * (libm::erf((x + half_width) / edge) - libm::erf((x - half_width) / edge))
}

/// Product of plateaus along every axis.
pub fn window(grid: &Grid2n, half_width: f64, edge: f64) -> GridFunction {
    GridFunction::from_real_fn(*grid, |z| z.iter().map(|x| plateau(*x, half_width, edge)).product())
}

/// `z_axis` cut off by `window`.
pub fn windowed_coordinate(grid: &Grid2n, axis: usize, half_width: f64, edge: f64) -> GridFunction {
    assert!(axis < grid.dim());
    GridFunction::from_real_fn(*grid, |z| {
        z[axis] * z.iter().map(|x| plateau(*x, half_width, edge)).product::<f64>()
    })
}

/// `f * g` at `(x, p)` for `f = e^{-(x-a)^2/2s^2 - (p-c)^2/2u^2}` and
/// `g = e^{-(x-d)^2/2v^2 - (p-b)^2/2t^2}` on one conjugate pair.
///
/// The star product factors as `I_1 I_2` with
/// `I_1 = int F_1(k) e^{ikx} g_p(p - hbar k/2) dk` and
/// `I_2 = int F_2(k) e^{ikp} g_x(x + hbar k/2) dk`, both Gaussian integrals.
pub fn gaussian_star_pair(f: [(f64, f64); 2], g: [(f64, f64); 2], hbar: f64, x: f64, p: f64) -> Complex64 {
    let [(a, s), (c, u)] = f;
    let [(d, v), (b, t)] = g;
    let pi = std::f64::consts::PI;
    let factor = |w: f64, width: f64, lin: Complex64, tail: f64| {
        let aa = 0.5 * w * w + hbar * hbar / (8.0 * width * width);
        (w / (2.0 * pi).sqrt()) * (pi / aa).sqrt() * (lin * lin / (4.0 * aa) - tail).exp()
    };
    let i1 = factor(
        s,
        t,
        Complex64::new(hbar * (p - b) / (2.0 * t * t), x - a),
        (p - b).powi(2) / (2.0 * t * t),
    );
    let i2 = factor(
        u,
        v,
        Complex64::new(-hbar * (x - d) / (2.0 * v * v), p - c),
        (x - d).powi(2) / (2.0 * v * v),
    );
    i1 * i2
}

/// Closed-form `f * g` for the axis-aligned Gaussians of [`gaussian`]; the
/// twist splits over conjugate pairs, so the result is a product of
/// [`gaussian_star_pair`] factors.
pub fn gaussian_star(
    grid: &Grid2n,
    f: (&[f64], &[f64]),
    g: (&[f64], &[f64]),
    hbar: f64,
) -> GridFunction {
    let n = grid.n();
    GridFunction::from_fn(*grid, |z| {
        (0..n)
            .map(|i| {
                let (x, p) = (i, n + i);
                gaussian_star_pair(
                    [(f.0[x], f.1[x]), (f.0[p], f.1[p])],
                    [(g.0[x], g.1[x]), (g.0[p], g.1[p])],
                    hbar,
                    z[x],
                    z[p],
                )
            })
            .product()
    })
}
