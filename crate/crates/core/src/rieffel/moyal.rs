use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::Grid2n;
use super::{poisson_bracket_grid, GridFunction, RieffelError};

/// Thresholds for the Fourier-space twisted convolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoyalOptions {
    /// Modes below `prune * max |F|`, and mode pairs below
    /// `prune * max |F| * max |G|`, are dropped.
    pub prune: f64,
    /// Largest tolerated share of `sum |F_k||G_l|` falling outside the band.
    pub alias_tolerance: f64,
    /// Largest tolerated boundary/peak ratio of an input.
    pub boundary_tolerance: f64,
}

impl Default for MoyalOptions {
    fn default() -> Self {
        Self {
            prune: 1e-14,
            alias_tolerance: 1e-10,
            boundary_tolerance: 1e-12,
        }
    }
}

impl MoyalOptions {
    /// Thresholds for coarse four-dimensional grids.
    pub fn relaxed() -> Self {
        Self {
            prune: 1e-7,
            alias_tolerance: 1e-5,
            boundary_tolerance: 1e-5,
        }
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Mode {
    pub(crate) j: [i64; 4],
    pub(crate) c: Complex64,
}

pub(crate) fn significant_modes(grid: &Grid2n, coeffs: &[Complex64], prune: f64) -> Vec<Mode> {
    let peak = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if peak == 0.0 {
        return Vec::new();
    }
    let cut = prune * peak;
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > cut)
        .map(|(idx, c)| {
            let m = grid.multi_index(idx);
            let mut j = [0; 4];
            for a in 0..grid.dim() {
                j[a] = grid.mode(m[a]);
            }
            Mode { j, c: *c }
        })
        .collect()
}

/// Fixed number of partial sums, independent of the thread count.
pub(crate) fn chunk_count(len: usize, item_bytes: usize) -> usize {
    ((64 << 20) / (len * item_bytes).max(1)).clamp(1, 16)
}

/// Deterministic pairwise reduction of equally sized partial sums.
pub(crate) fn pairwise_sum(mut parts: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.par_iter_mut().zip(b.par_iter()).for_each(|(x, y)| *x += *y);
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

pub(crate) fn check_hbar(hbar: f64) -> Result<(), RieffelError> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(RieffelError::InvalidHbar(hbar))
    }
}

pub(crate) fn check_boundary(f: &GridFunction, tol: f64) -> Result<(), RieffelError> {
    let ratio = f.boundary_ratio();
    if ratio > tol {
        Err(RieffelError::Leakage { ratio })
    } else {
        Ok(())
    }
}

/// `(f * g)^(m) = sum_{k+l=m} F_k G_l e^{-(i hbar/2) k^T J l}` over the
/// pairs with `|F_k G_l| > prune * max|F| * max|G|`.
fn twisted_convolution(
    grid: &Grid2n,
    fc: &[Complex64],
    gc: &[Complex64],
    hbar: f64,
    opts: &MoyalOptions,
) -> Result<Vec<Complex64>, RieffelError> {
    let fm = significant_modes(grid, fc, opts.prune);
    let gm = significant_modes(grid, gc, opts.prune);
    let n = grid.n();
    let dim = grid.dim();
    let pts = grid.points() as i64;
    let half = pts / 2;
    // k^T J l = dk^2 * u with integer u; tabulate the phase per u.
    let u_max = (n as i64) * 2 * half * half;
    let theta = 0.5 * hbar * grid.wavenumber_step().powi(2);
    let phase: Vec<Complex64> = (-u_max..=u_max)
        .map(|u| Complex64::from_polar(1.0, -theta * u as f64))
        .collect();
    let strides: Vec<usize> = (0..dim)
        .map(|a| grid.points().pow((dim - 1 - a) as u32))
        .collect();
    let len = grid.len();
    let chunks = chunk_count(len, 16).min(fm.len().max(1));
    let per = fm.len().div_ceil(chunks).max(1);
    let peak = |m: &[Mode]| m.iter().fold(0.0_f64, |a, x| a.max(x.c.norm()));
    let cut = opts.prune * peak(&fm) * peak(&gm);
    let parts: Vec<(Vec<Complex64>, f64, f64)> = match dim {
        2 => pair_sums::<2>(&fm, &gm, &strides, pts, &phase, u_max, per, len, cut),
        _ => pair_sums::<4>(&fm, &gm, &strides, pts, &phase, u_max, per, len, cut),
    };

    let aliased: f64 = parts.iter().map(|p| p.1).sum();
    let total: f64 = parts.iter().map(|p| p.2).sum();
    if total > 0.0 && aliased / total > opts.alias_tolerance {
        return Err(RieffelError::Aliasing {
            ratio: aliased / total,
        });
    }
    let partials = parts.into_iter().map(|p| p.0).collect::<Vec<_>>();
    if partials.is_empty() {
        return Ok(vec![Complex64::new(0.0, 0.0); len]);
    }
    Ok(pairwise_sum(partials))
}

struct TwistedMode<const D: usize> {
    j: [i64; D],
    jl: [i64; D],
    c: Complex64,
    norm: f64,
}

fn to_twisted<const D: usize>(modes: &[Mode]) -> Vec<TwistedMode<D>> {
    let n = D / 2;
    modes
        .iter()
        .map(|m| {
            let mut j = [0; D];
            let mut jl = [0; D];
            j.copy_from_slice(&m.j[..D]);
            // Jl = (l_p, -l_x).
            for i in 0..n {
                jl[i] = m.j[n + i];
                jl[n + i] = -m.j[i];
            }
            TwistedMode {
                j,
                jl,
                c: m.c,
                norm: m.c.norm(),
            }
        })
        .collect()
}

/// Partial sums over fixed chunks of the modes of `f`, plus the aliased mass.
#[allow(clippy::too_many_arguments)]
fn pair_sums<const D: usize>(
    fm: &[Mode],
    gm: &[Mode],
    strides: &[usize],
    pts: i64,
    phase: &[Complex64],
    u_max: i64,
    per: usize,
    len: usize,
    cut: f64,
) -> Vec<(Vec<Complex64>, f64, f64)> {
    let half = pts / 2;
    let fk = to_twisted::<D>(fm);
    let mut gl = to_twisted::<D>(gm);
    // Descending magnitude, so each k can stop at its own threshold.
    gl.sort_by(|a, b| b.norm.total_cmp(&a.norm));
    let mut stride = [0usize; D];
    stride.copy_from_slice(&strides[..D]);
    fk.par_chunks(per)
        .map(|chunk| {
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            let mut aliased = 0.0;
            let mut total = 0.0;
            for k in chunk {
                let floor = cut / k.norm;
                'pair: for l in &gl {
                    if l.norm <= floor {
                        break;
                    }
                    total += k.norm * l.norm;
                    let mut idx = 0;
                    let mut u = 0;
                    for a in 0..D {
                        let m = k.j[a] + l.j[a];
                        if m < -half || m >= half {
                            aliased += k.norm * l.norm;
                            continue 'pair;
                        }
                        idx += (if m < 0 { m + pts } else { m }) as usize * stride[a];
                        u += k.j[a] * l.jl[a];
                    }
                    out[idx] += k.c * l.c * phase[(u + u_max) as usize];
                }
            }
            (out, aliased, total)
        })
        .collect()
}

pub fn moyal_product(f: &GridFunction, g: &GridFunction, hbar: f64) -> Result<GridFunction, RieffelError> {
    moyal_product_with(f, g, hbar, &MoyalOptions::default())
}

pub fn moyal_product_with(
    f: &GridFunction,
    g: &GridFunction,
    hbar: f64,
    opts: &MoyalOptions,
) -> Result<GridFunction, RieffelError> {
    f.same_grid(g)?;
    check_hbar(hbar)?;
    check_boundary(f, opts.boundary_tolerance)?;
    check_boundary(g, opts.boundary_tolerance)?;
    let grid = *f.grid();
    let h = twisted_convolution(&grid, &f.fourier(), &g.fourier(), hbar, opts)?;
    Ok(GridFunction::from_fourier(grid, h))
}

/// `sup |(1/(i hbar))(f*g - g*f) - {f, g}|`.
pub fn dirac_defect_grid(
    f: &GridFunction,
    g: &GridFunction,
    hbar: f64,
    opts: &MoyalOptions,
) -> Result<f64, RieffelError> {
    let fg = moyal_product_with(f, g, hbar, opts)?;
    let gf = moyal_product_with(g, f, hbar, opts)?;
    let comm = fg.sub(&gf)?.scale(Complex64::new(0.0, -1.0 / hbar));
    comm.sup_distance(&poisson_bracket_grid(f, g)?)
}

/// `sup |f*g - fg|`.
pub fn von_neumann_defect_grid(
    f: &GridFunction,
    g: &GridFunction,
    hbar: f64,
    opts: &MoyalOptions,
) -> Result<f64, RieffelError> {
    moyal_product_with(f, g, hbar, opts)?.sup_distance(&f.mul(g)?)
}
