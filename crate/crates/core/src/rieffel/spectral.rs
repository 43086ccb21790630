use num_complex::Complex64;
use rayon::prelude::*;

use super::{GridFunction, RieffelError};

/// Multiplies the spectrum by `m(axis, fft index)` factors, one per axis.
fn multiply_separable(
    f: &GridFunction,
    factor: impl Fn(usize, usize) -> Complex64 + Sync,
) -> GridFunction {
    let grid = *f.grid();
    let dim = grid.dim();
    let tables: Vec<Vec<Complex64>> = (0..dim)
        .map(|a| (0..grid.points()).map(|i| factor(a, i)).collect())
        .collect();
    let mut coeffs = f.fourier();
    coeffs.par_iter_mut().enumerate().for_each(|(idx, c)| {
        let m = grid.multi_index(idx);
        for a in 0..dim {
            *c *= tables[a][m[a]];
        }
    });
    GridFunction::from_fourier(grid, coeffs)
}

/// `tau_x f = f(. + x)`, computed as a spectral phase shift.
pub fn translate(f: &GridFunction, x: &[f64]) -> Result<GridFunction, RieffelError> {
    let grid = *f.grid();
    grid.check_vector(x)?;
    let dk = grid.wavenumber_step();
    Ok(multiply_separable(f, |a, i| {
        let theta = dk * grid.mode(i) as f64 * x[a];
        if grid.is_nyquist(i) {
            // The Nyquist mode is shared by +k and -k; keep the real part.
            Complex64::new(theta.cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, theta)
        }
    }))
}

/// Spectral partial derivatives along every axis.
pub fn gradient(f: &GridFunction) -> Vec<GridFunction> {
    let grid = *f.grid();
    let dk = grid.wavenumber_step();
    let coeffs = f.fourier();
    (0..grid.dim())
        .map(|axis| {
            let mut c = coeffs.clone();
            c.par_iter_mut().enumerate().for_each(|(idx, v)| {
                let i = grid.multi_index(idx)[axis];
                *v *= if grid.is_nyquist(i) {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, dk * grid.mode(i) as f64)
                };
            });
            GridFunction::from_fourier(grid, c)
        })
        .collect()
}

/// `xi_X f = X . grad f`.
pub fn lie_derivative(f: &GridFunction, x: &[f64]) -> Result<GridFunction, RieffelError> {
    let grid = *f.grid();
    grid.check_vector(x)?;
    let dk = grid.wavenumber_step();
    let coeffs = f.fourier();
    let mut out = coeffs;
    out.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let m = grid.multi_index(idx);
        let mut k_dot = 0.0;
        for a in 0..grid.dim() {
            if !grid.is_nyquist(m[a]) {
                k_dot += dk * grid.mode(m[a]) as f64 * x[a];
            }
        }
        *v *= Complex64::new(0.0, k_dot);
    });
    Ok(GridFunction::from_fourier(grid, out))
}

/// `{f, g} = sum_jk J_jk xi_j(f) xi_k(g)` in the standard basis.
pub fn poisson_bracket_grid(f: &GridFunction, g: &GridFunction) -> Result<GridFunction, RieffelError> {
    f.same_grid(g)?;
    let n = f.grid().n();
    let df = gradient(f);
    let dg = gradient(g);
    let samples = (0..f.grid().len())
        .into_par_iter()
        .map(|idx| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let (x, p) = (i, n + i);
                acc += df[x].samples()[idx] * dg[p].samples()[idx]
                    - df[p].samples()[idx] * dg[x].samples()[idx];
            }
            acc
        })
        .collect();
    Ok(GridFunction::from_parts(*f.grid(), samples))
}
