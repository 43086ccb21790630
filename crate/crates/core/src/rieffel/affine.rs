use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moyal::{chunk_count, pairwise_sum, significant_modes};
use super::{moyal_product_with, translate, GridFunction, MoyalOptions, RieffelError};

const SYMPLECTIC_TOLERANCE: f64 = 1e-12;

/// `z -> A z + b` on `R^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSymplecticMap {
    linear: Vec<Vec<f64>>,
    shift: Vec<f64>,
}

fn standard_j(dim: usize) -> DMatrix<f64> {
    let n = dim / 2;
    DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + n {
            1.0
        } else if r == c + n {
            -1.0
        } else {
            0.0
        }
    })
}

impl AffineSymplecticMap {
    /// Checks `A^T J A = J` entrywise to `1e-12`.
    pub fn new(linear: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self, RieffelError> {
        let m = Self::unchecked(linear, shift)?;
        let r = m.symplectic_residual();
        if r > SYMPLECTIC_TOLERANCE {
            return Err(RieffelError::NotSymplectic(r));
        }
        Ok(m)
    }

    /// Shape checks only; used for non-symplectic controls.
    pub fn unchecked(linear: Vec<Vec<f64>>, shift: Vec<f64>) -> Result<Self, RieffelError> {
        let dim = shift.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(RieffelError::Dimension { expected: 2, got: dim });
        }
        if linear.len() != dim || linear.iter().any(|row| row.len() != dim) {
            return Err(RieffelError::Dimension {
                expected: dim,
                got: linear.len(),
            });
        }
        if linear.iter().flatten().chain(&shift).any(|x| !x.is_finite()) {
            return Err(RieffelError::Format("non-finite map entry".into()));
        }
        Ok(Self { linear, shift })
    }

    pub fn identity(dim: usize) -> Self {
        Self::translation(vec![0.0; dim])
    }

    pub fn translation(b: Vec<f64>) -> Self {
        let dim = b.len();
        let linear = (0..dim)
            .map(|r| (0..dim).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { linear, shift: b }
    }

    /// Rotation by `theta` in every `(x_i, p_i)` plane.
    pub fn rotation(n: usize, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut m = Self::identity(2 * n);
        for i in 0..n {
            m.linear[i][i] = c;
            m.linear[i][n + i] = -s;
            m.linear[n + i][i] = s;
            m.linear[n + i][n + i] = c;
        }
        m
    }

    /// `x_i -> x_i + s p_i`.
    pub fn position_shear(n: usize, s: f64) -> Self {
        let mut m = Self::identity(2 * n);
        for i in 0..n {
            m.linear[i][n + i] = s;
        }
        m
    }

    /// `p_i -> p_i + s x_i`.
    pub fn momentum_shear(n: usize, s: f64) -> Self {
        let mut m = Self::identity(2 * n);
        for i in 0..n {
            m.linear[n + i][i] = s;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn linear(&self) -> &[Vec<f64>] {
        &self.linear
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    fn matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| self.linear[r][c])
    }

    /// `max |A^T J A - J|`.
    pub fn symplectic_residual(&self) -> f64 {
        let a = self.matrix();
        let j = standard_j(self.dim());
        (a.transpose() * &j * &a - j).amax()
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        self.linear
            .iter()
            .zip(&self.shift)
            .map(|(row, b)| row.iter().zip(z).map(|(a, x)| a * x).sum::<f64>() + b)
            .collect()
    }

    /// `self o inner`.
    pub fn after(&self, inner: &Self) -> Self {
        let a = self.matrix() * inner.matrix();
        let b = self.apply(&inner.shift);
        let d = self.dim();
        Self {
            linear: (0..d).map(|r| (0..d).map(|c| a[(r, c)]).collect()).collect(),
            shift: b,
        }
    }

    pub fn inverse(&self) -> Result<Self, RieffelError> {
        let inv = self.matrix().try_inverse().ok_or(RieffelError::Singular)?;
        let b = -(&inv * DVector::from_column_slice(&self.shift));
        let d = self.dim();
        Ok(Self {
            linear: (0..d).map(|r| (0..d).map(|c| inv[(r, c)]).collect()).collect(),
            shift: b.iter().copied().collect(),
        })
    }

    /// `S X`, the linear part applied to a direction.
    pub fn push_direction(&self, x: &[f64]) -> Vec<f64> {
        self.linear
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, v)| a * v).sum())
            .collect()
    }
}

/// Errors if some point of the effective support of `f` has a preimage
/// outside the interior of the cell.
fn check_support(f: &GridFunction, phi: &AffineSymplecticMap, tol: f64) -> Result<(), RieffelError> {
    let grid = f.grid();
    let inv = phi.inverse()?;
    let limit = 0.5 * grid.extent() - grid.spacing();
    let cut = tol * f.sup_norm();
    let dim = grid.dim();
    let escapes = f.samples().par_iter().enumerate().any(|(idx, v)| {
        v.norm() > cut && inv.apply(&grid.point(idx)[..dim]).iter().any(|x| x.abs() > limit)
    });
    if escapes {
        Err(RieffelError::SupportEscapes)
    } else {
        Ok(())
    }
}

/// `f o phi`, by evaluating the trigonometric interpolant of `f` at the
/// mapped grid points. Points mapped off the cell get 0.
pub fn pullback(
    f: &GridFunction,
    phi: &AffineSymplecticMap,
    opts: &MoyalOptions,
) -> Result<GridFunction, RieffelError> {
    let grid = *f.grid();
    grid.check_vector(&phi.shift)?;
    check_support(f, phi, opts.boundary_tolerance)?;
    let dim = grid.dim();
    let pts = grid.points();
    let dk = grid.wavenumber_step();
    let offset = 0.5 * grid.extent();
    let modes = significant_modes(&grid, &f.fourier(), opts.prune);
    let coords: Vec<f64> = (0..pts).map(|i| grid.coordinate(i)).collect();

    let len = grid.len();
    let chunks = chunk_count(len, 16).min(modes.len().max(1));
    let per = modes.len().div_ceil(chunks).max(1);
    let parts: Vec<Vec<Complex64>> = modes
        .par_chunks(per)
        .map(|chunk| {
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            let mut axes = vec![vec![Complex64::new(0.0, 0.0); pts]; dim];
            for m in chunk {
                let k: Vec<f64> = (0..dim).map(|a| dk * m.j[a] as f64).collect();
                // k.(A z + b + L/2) = (A^T k).z + k.(b + L/2)
                let mut base = 0.0;
                for a in 0..dim {
                    base += k[a] * (phi.shift[a] + offset);
                }
                for (c, axis) in axes.iter_mut().enumerate() {
                    let w: f64 = (0..dim).map(|r| phi.linear[r][c] * k[r]).sum();
                    for (e, z) in axis.iter_mut().zip(&coords) {
                        *e = Complex64::from_polar(1.0, w * z);
                    }
                }
                let c0 = m.c * Complex64::from_polar(1.0, base);
                accumulate_outer(&mut out, &axes, c0, pts);
            }
            out
        })
        .collect();
    let mut samples = if parts.is_empty() {
        vec![Complex64::new(0.0, 0.0); len]
    } else {
        pairwise_sum(parts)
    };
    // f stands for a function on R^{2n} that vanishes off the cell; do not
    // let mapped points pick up its periodic copies.
    samples.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let w = phi.apply(&grid.point(idx)[..dim]);
        if w.iter().any(|x| *x < -offset || *x >= offset) {
            *v = Complex64::new(0.0, 0.0);
        }
    });
    Ok(GridFunction::from_parts(grid, samples))
}

/// `out += c * axes[0] (x) axes[1] (x) ...`.
fn accumulate_outer(out: &mut [Complex64], axes: &[Vec<Complex64>], c: Complex64, pts: usize) {
    if axes.len() == 1 {
        for (o, e) in out.iter_mut().zip(&axes[0]) {
            *o += c * e;
        }
        return;
    }
    let block = out.len() / pts;
    for (i, chunk) in out.chunks_mut(block).enumerate() {
        accumulate_outer(chunk, &axes[1..], c * axes[0][i], pts);
    }
}

/// `sup |(f*g) o phi - (f o phi)*(g o phi)| / sup |(f*g) o phi|`.
pub fn morphism_star_defect(
    phi: &AffineSymplecticMap,
    f: &GridFunction,
    g: &GridFunction,
    hbar: f64,
    opts: &MoyalOptions,
) -> Result<f64, RieffelError> {
    let lhs = pullback(&moyal_product_with(f, g, hbar, opts)?, phi, opts)?;
    let rhs = moyal_product_with(&pullback(f, phi, opts)?, &pullback(g, phi, opts)?, hbar, opts)?;
    let scale = lhs.sup_norm();
    let diff = lhs.sup_distance(&rhs)?;
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// `sup |(tau_{SX} f) o phi - tau_X (f o phi)|` with `S` the linear part.
pub fn equivariance_defect(
    phi: &AffineSymplecticMap,
    f: &GridFunction,
    x: &[f64],
    opts: &MoyalOptions,
) -> Result<f64, RieffelError> {
    f.grid().check_vector(x)?;
    let lhs = pullback(&translate(f, &phi.push_direction(x))?, phi, opts)?;
    let rhs = translate(&pullback(f, phi, opts)?, x)?;
    lhs.sup_distance(&rhs)
}
