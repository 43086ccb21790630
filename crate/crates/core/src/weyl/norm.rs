//! Torus scan behind the classical sup-norm estimate.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::symplectic::{Rational, RationalMatrix, RationalVector};

/// Coordinates of each label in a basis of the lattice they span, scaled to
/// be integers. Labels spanning a rank-`r` space get `r` coordinates each.
pub(crate) fn integer_coordinates(labels: &[&RationalVector]) -> Vec<Vec<i64>> {
    let mut basis: Vec<RationalVector> = Vec::new();
    for f in labels {
        let mut rows: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        rows.push(f.entries().to_vec());
        let m = RationalMatrix::from_rows(rows).expect("labels share a dimension");
        if m.rank() > basis.len() {
            basis.push((*f).clone());
        }
    }
    let r = basis.len();
    if r == 0 {
        return labels.iter().map(|_| Vec::new()).collect();
    }
    let dim = labels[0].len();
    // Pick r coordinate rows on which the basis is invertible.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..dim {
        let mut trial = chosen.clone();
        trial.push(i);
        let rows: Vec<Vec<Rational>> = trial
            .iter()
            .map(|&row| basis.iter().map(|b| b.entries()[row].clone()).collect())
            .collect();
        if RationalMatrix::from_rows(rows).expect("rectangular").rank() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == r {
            break;
        }
    }
    let sub: Vec<Vec<Rational>> = chosen
        .iter()
        .map(|&row| basis.iter().map(|b| b.entries()[row].clone()).collect())
        .collect();
    let inv = RationalMatrix::from_rows(sub)
        .expect("square")
        .inverse()
        .expect("basis restricted to chosen rows is invertible");
    let coords: Vec<RationalVector> = labels
        .iter()
        .map(|f| {
            let rhs = RationalVector::new(chosen.iter().map(|&i| f.entries()[i].clone()).collect());
            inv.mul_vec(&rhs).expect("shapes agree")
        })
        .collect();
    let lcm = coords
        .iter()
        .flat_map(|c| c.entries().iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = Rational::from_integer(lcm);
    coords
        .iter()
        .map(|c| {
            c.entries()
                .iter()
                .map(|x| {
                    (x * &scale)
                        .to_integer()
                        .to_i64()
                        .expect("lattice coordinate fits in i64")
                })
                .collect()
        })
        .collect()
}

const MAX_RANK: usize = 8;

/// Maximum of `|sum_j c_j exp(2 pi i n_j . k / M)|` over the grid `k in Z_M^r`.
pub(crate) fn torus_sup(coords: &[Vec<i64>], coeffs: &[Complex64], resolution: usize) -> f64 {
    let r = coords.first().map_or(0, Vec::len);
    if r == 0 {
        return coeffs.iter().sum::<Complex64>().norm();
    }
    assert!(r <= MAX_RANK, "torus scan supports lattice rank up to {MAX_RANK}");
    let max_freq = coords
        .iter()
        .flat_map(|c| c.iter())
        .map(|n| n.unsigned_abs())
        .max()
        .unwrap_or(0) as usize;
    let m = resolution.max(2 * max_freq + 1).max(2).next_power_of_two();
    let table: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect();
    let mi = m as i64;
    let total = m.pow(r as u32);
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = [0i64; MAX_RANK];
            let mut rest = flat;
            for slot in idx.iter_mut().take(r) {
                *slot = (rest % m) as i64;
                rest /= m;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (n, c) in coords.iter().zip(coeffs) {
                let phase = n
                    .iter()
                    .zip(&idx)
                    .fold(0i64, |s, (a, k)| (s + a.rem_euclid(mi) * k) % mi);
                acc += c * table[phase as usize];
            }
            acc.norm()
        })
        .reduce(|| 0.0, f64::max)
}
