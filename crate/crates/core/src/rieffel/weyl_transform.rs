use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::moyal::{check_hbar, chunk_count, pairwise_sum, significant_modes};
use super::{moyal_product_with, GridFunction, MoyalOptions, RieffelError};

/// Dense `N x N` complex matrix in the oscillator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl WeylMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, RieffelError> {
        if entries.len() != dim * dim {
            return Err(RieffelError::Format(format!("expected {} entries", dim * dim)));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    fn zip(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.dim, other.dim, "matrix sizes differ");
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| op(*a, *b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix sizes differ");
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        entries.par_chunks_mut(n).enumerate().for_each(|(r, row)| {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (c, out) in row.iter_mut().enumerate() {
                    *out += a * other.entries[k * n + c];
                }
            }
        });
        Self { dim: n, entries }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `||W - W^dagger||_F / ||W||_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        let norm = self.frobenius_norm();
        let d = self.sub(&self.adjoint()).frobenius_norm();
        if norm > 0.0 {
            d / norm
        } else {
            d
        }
    }
}

/// `Q = sqrt(hbar/2)(a + a^dagger)` truncated to `dim` levels.
pub fn position_matrix(dim: usize, hbar: f64) -> WeylMatrix {
    ladder_combination(dim, hbar, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
}

/// `P = i sqrt(hbar/2)(a^dagger - a)` truncated to `dim` levels.
pub fn momentum_matrix(dim: usize, hbar: f64) -> WeylMatrix {
    ladder_combination(dim, hbar, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0))
}

/// `sqrt(hbar/2)(lower a + raise a^dagger)`.
fn ladder_combination(dim: usize, hbar: f64, lower: Complex64, raise: Complex64) -> WeylMatrix {
    let s = (0.5 * hbar).sqrt();
    let mut m = WeylMatrix::zeros(dim);
    for k in 0..dim.saturating_sub(1) {
        let e = s * ((k + 1) as f64).sqrt();
        m.entries[k * dim + k + 1] = lower * e;
        m.entries[(k + 1) * dim + k] = raise * e;
    }
    m
}

/// Exact matrix elements `<m|D(alpha)|n>`, `m, n < dim`, of the displacement
/// `D(alpha) = exp(alpha a^dagger - conj(alpha) a)`.
pub fn displacement_matrix(dim: usize, alpha: Complex64) -> WeylMatrix {
    let mut d = WeylMatrix::zeros(dim);
    write_displacement(&mut d.entries, dim, alpha);
    d
}

/// Uses `<n+k|D|n> = e^{ik arg alpha} l_n^k(|alpha|^2)` and
/// `<n|D|n+k> = (-1)^k e^{-ik arg alpha} l_n^k(|alpha|^2)`, where
/// `l_n^k(x) = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^k(x)` runs along each
/// diagonal by the three-term Laguerre recurrence.
fn write_displacement(out: &mut [Complex64], dim: usize, alpha: Complex64) {
    let x = alpha.norm_sqr();
    out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    if x == 0.0 {
        for i in 0..dim {
            out[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        return;
    }
    let unit = alpha / x.sqrt();
    let roots: Vec<f64> = (0..=2 * dim).map(|i| (i as f64).sqrt()).collect();
    let mut rot = Complex64::new(1.0, 0.0);
    for k in 0..dim {
        let lower = rot;
        let upper = if k % 2 == 0 { rot.conj() } else { -rot.conj() };
        let mut prev = 0.0;
        let mut cur = (0.5 * k as f64 * x.ln() - 0.5 * x - 0.5 * libm::lgamma(k as f64 + 1.0)).exp();
        for n in 0..dim - k {
            out[(n + k) * dim + n] = lower * cur;
            if k > 0 {
                out[n * dim + n + k] = upper * cur;
            }
            let next = ((2 * n + 1 + k) as f64 - x) * cur - roots[n] * roots[n + k] * prev;
            prev = cur;
            cur = next / (roots[n + 1] * roots[n + k + 1]);
        }
        rot *= unit;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylTransformOptions {
    /// Fourier modes below `prune * max |F|` are dropped.
    pub prune: f64,
    /// Fails when `|Tr_N W(f) - (2 pi hbar)^-1 int f| > tol * (2 pi hbar)^-1 int |f|`.
    /// `None` disables the check, e.g. for plateau functions whose support
    /// is far larger than any truncation.
    pub trace_tolerance: Option<f64>,
}

impl Default for WeylTransformOptions {
    fn default() -> Self {
        Self {
            prune: 1e-14,
            trace_tolerance: Some(0.1),
        }
    }
}

pub fn weyl_transform(f: &GridFunction, hbar: f64, dim: usize) -> Result<WeylMatrix, RieffelError> {
    weyl_transform_with(f, hbar, dim, &WeylTransformOptions::default())
}

/// `W(f) = sum_k c_k exp(i(k_x Q + k_p P))` over the Fourier modes of `f`,
/// each exponential taken as the exact displacement block with
/// `alpha = sqrt(hbar/2)(-k_p + i k_x)`.
pub fn weyl_transform_with(
    f: &GridFunction,
    hbar: f64,
    dim: usize,
    opts: &WeylTransformOptions,
) -> Result<WeylMatrix, RieffelError> {
    let grid = *f.grid();
    if grid.n() != 1 {
        return Err(RieffelError::Unsupported(1));
    }
    check_hbar(hbar)?;
    if dim < 16 {
        return Err(RieffelError::Truncation {
            dim,
            residual: f64::INFINITY,
        });
    }
    let dk = grid.wavenumber_step();
    let s = (0.5 * hbar).sqrt();
    let half_extent = 0.5 * grid.extent();
    let modes = significant_modes(&grid, &f.fourier(), opts.prune);
    let len = dim * dim;
    let chunks = chunk_count(len, 16).min(modes.len().max(1));
    let per = modes.len().div_ceil(chunks).max(1);
    let parts: Vec<Vec<Complex64>> = modes
        .par_chunks(per)
        .map(|chunk| {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            let mut d = vec![Complex64::new(0.0, 0.0); len];
            for m in chunk {
                let (kx, kp) = (dk * m.j[0] as f64, dk * m.j[1] as f64);
                // Grid coefficients refer to e^{ik(z + L/2)}.
                let c = m.c * Complex64::from_polar(1.0, (kx + kp) * half_extent);
                write_displacement(&mut d, dim, Complex64::new(-s * kp, s * kx));
                for (a, v) in acc.iter_mut().zip(&d) {
                    *a += c * v;
                }
            }
            acc
        })
        .collect();
    let entries = if parts.is_empty() {
        vec![Complex64::new(0.0, 0.0); len]
    } else {
        pairwise_sum(parts)
    };
    let w = WeylMatrix { dim, entries };
    if let Some(tol) = opts.trace_tolerance {
        let norm = 1.0 / (2.0 * std::f64::consts::PI * hbar);
        let full = f.integral() * norm;
        let cell = grid.spacing().powi(2);
        let scale = f.samples().iter().map(|c| c.norm()).sum::<f64>() * cell * norm;
        let residual = if scale > 0.0 {
            (w.trace() - full).norm() / scale
        } else {
            0.0
        };
        if residual > tol {
            return Err(RieffelError::Truncation { dim, residual });
        }
    }
    Ok(w)
}

/// `||W(f*g) - W(f)W(g)||_F / (||W(f)||_F ||W(g)||_F)`.
pub fn homomorphism_residual(
    f: &GridFunction,
    g: &GridFunction,
    hbar: f64,
    dim: usize,
    opts: &MoyalOptions,
) -> Result<f64, RieffelError> {
    let wopts = WeylTransformOptions {
        prune: opts.prune,
        ..WeylTransformOptions::default()
    };
    let fg = moyal_product_with(f, g, hbar, opts)?;
    let wf = weyl_transform_with(f, hbar, dim, &wopts)?;
    let wg = weyl_transform_with(g, hbar, dim, &wopts)?;
    let wfg = weyl_transform_with(&fg, hbar, dim, &wopts)?;
    let denom = wf.frobenius_norm() * wg.frobenius_norm();
    Ok(wfg.sub(&wf.mul(&wg)).frobenius_norm() / denom)
}
