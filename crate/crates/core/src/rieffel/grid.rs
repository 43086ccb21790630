use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::RieffelError;

/// Uniform periodic grid on `[-L/2, L/2)^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2n {
    n: usize,
    points: usize,
    extent: f64,
}

impl Grid2n {
    pub fn new(n: usize, points: usize, extent: f64) -> Result<Self, RieffelError> {
        if n != 1 && n != 2 {
            return Err(RieffelError::InvalidGrid(format!("n must be 1 or 2, got {n}")));
        }
        if points < 32 || !points.is_power_of_two() {
            return Err(RieffelError::InvalidGrid(format!(
                "points per axis must be a power of two >= 32, got {points}"
            )));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(RieffelError::InvalidGrid(format!("extent must be positive, got {extent}")));
        }
        Ok(Self { n, points, extent })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.points as f64
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 * self.extent + i as f64 * self.spacing()
    }

    /// Row-major multi-index, axis 0 slowest.
    pub fn multi_index(&self, mut idx: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for a in (0..self.dim()).rev() {
            out[a] = idx % self.points;
            idx /= self.points;
        }
        out
    }

    pub fn point(&self, idx: usize) -> [f64; 4] {
        let m = self.multi_index(idx);
        let mut z = [0.0; 4];
        for a in 0..self.dim() {
            z[a] = self.coordinate(m[a]);
        }
        z
    }

    /// Signed mode number of FFT index `i`, in `[-N/2, N/2)`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn wavenumber_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.extent
    }

    pub(crate) fn is_nyquist(&self, i: usize) -> bool {
        i == self.points / 2
    }

    pub(crate) fn on_boundary(&self, idx: usize) -> bool {
        let m = self.multi_index(idx);
        m[..self.dim()].iter().any(|&i| i == 0)
    }

    pub(crate) fn check_vector(&self, v: &[f64]) -> Result<(), RieffelError> {
        if v.len() != self.dim() {
            return Err(RieffelError::Dimension {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid2n,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid2n, samples: Vec<Complex64>) -> Result<Self, RieffelError> {
        if samples.len() != grid.len() {
            return Err(RieffelError::Format(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(RieffelError::Format("non-finite sample".into()));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid2n, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let dim = grid.dim();
        let samples = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(&grid.point(idx)[..dim]))
            .collect();
        Self { grid, samples }
    }

    pub fn from_real_fn(grid: Grid2n, f: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        Self::from_fn(grid, |z| Complex64::new(f(z), 0.0))
    }

    pub fn constant(grid: Grid2n, c: Complex64) -> Self {
        Self {
            grid,
            samples: vec![c; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid2n {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub(crate) fn from_parts(grid: Grid2n, samples: Vec<Complex64>) -> Self {
        Self { grid, samples }
    }

    pub(crate) fn same_grid(&self, other: &Self) -> Result<(), RieffelError> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(RieffelError::GridMismatch)
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64 + Sync) -> Result<Self, RieffelError> {
        self.same_grid(other)?;
        let samples = self
            .samples
            .par_iter()
            .zip(other.samples.par_iter())
            .map(|(a, b)| op(*a, *b))
            .collect();
        Ok(Self::from_parts(self.grid, samples))
    }

    pub fn add(&self, other: &Self) -> Result<Self, RieffelError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RieffelError> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self, RieffelError> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn map(&self, op: impl Fn(Complex64) -> Complex64 + Sync) -> Self {
        Self::from_parts(self.grid, self.samples.par_iter().map(|v| op(*v)).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64, RieffelError> {
        self.same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Largest `|f|` on the boundary faces relative to the largest `|f|`.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.sup_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let edge = self
            .samples
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.on_boundary(*i))
            .fold(0.0_f64, |m, (_, c)| m.max(c.norm()));
        edge / peak
    }

    /// DFT coefficients `F_j` with `f_i = sum_j F_j e^{2 pi i j.i / N}`.
    pub fn fourier(&self) -> Vec<Complex64> {
        let mut data = self.samples.clone();
        fft_nd(&self.grid, &mut data, false);
        let scale = 1.0 / self.grid.len() as f64;
        data.par_iter_mut().for_each(|c| *c *= scale);
        data
    }

    pub fn from_fourier(grid: Grid2n, mut coeffs: Vec<Complex64>) -> Self {
        fft_nd(&grid, &mut coeffs, true);
        Self::from_parts(grid, coeffs)
    }

    /// Integral over the periodic cell.
    pub fn integral(&self) -> Complex64 {
        let cell = self.grid.spacing().powi(self.grid.dim() as i32);
        self.samples.iter().sum::<Complex64>() * cell
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor::for_grid(&self.grid)
    }

    /// Header `n, points, extent` as little-endian doubles, then row-major
    /// `(re, im)` pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 16 * self.samples.len());
        for h in [self.grid.n as f64, self.grid.points as f64, self.grid.extent] {
            out.extend_from_slice(&h.to_le_bytes());
        }
        for c in &self.samples {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, RieffelError> {
        let read = |i: usize| -> Result<f64, RieffelError> {
            bytes
                .get(8 * i..8 * i + 8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("eight bytes")))
                .ok_or_else(|| RieffelError::Format("truncated grid file".into()))
        };
        let (n, points, extent) = (read(0)?, read(1)?, read(2)?);
        if n.fract() != 0.0 || points.fract() != 0.0 || n < 0.0 || points < 0.0 {
            return Err(RieffelError::Format("header fields n and points must be integers".into()));
        }
        let grid = Grid2n::new(n as usize, points as usize, extent)?;
        if bytes.len() != 24 + 16 * grid.len() {
            return Err(RieffelError::Format(format!(
                "expected {} bytes, got {}",
                24 + 16 * grid.len(),
                bytes.len()
            )));
        }
        let samples = (0..grid.len())
            .map(|k| Ok(Complex64::new(read(3 + 2 * k)?, read(4 + 2 * k)?)))
            .collect::<Result<Vec<_>, RieffelError>>()?;
        Self::new(grid, samples)
    }

    /// Writes `<stem>.bin` and `<stem>.json`.
    pub fn write(&self, stem: &Path) -> Result<(), RieffelError> {
        std::fs::write(stem.with_extension("bin"), self.to_bytes())?;
        let json = serde_json::to_string_pretty(&self.descriptor())
            .map_err(|e| RieffelError::Format(e.to_string()))?;
        std::fs::write(stem.with_extension("json"), json + "\n")?;
        Ok(())
    }

    /// Reads `<stem>.bin` and checks it against `<stem>.json`.
    pub fn read(stem: &Path) -> Result<Self, RieffelError> {
        let f = Self::from_bytes(&std::fs::read(stem.with_extension("bin"))?)?;
        let text = std::fs::read_to_string(stem.with_extension("json"))?;
        let desc: GridDescriptor =
            serde_json::from_str(&text).map_err(|e| RieffelError::Format(e.to_string()))?;
        if desc != f.descriptor() {
            return Err(RieffelError::Format("descriptor does not match binary header".into()));
        }
        Ok(f)
    }
}

/// JSON sidecar of the binary grid format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub n: usize,
    pub points_per_axis: usize,
    pub extent: f64,
    pub axes: Vec<String>,
    pub layout: String,
    pub dtype: String,
    pub header_doubles: usize,
}

impl GridDescriptor {
    pub fn for_grid(grid: &Grid2n) -> Self {
        let mut axes: Vec<String> = (1..=grid.n).map(|i| format!("x{i}")).collect();
        axes.extend((1..=grid.n).map(|i| format!("p{i}")));
        Self {
            n: grid.n,
            points_per_axis: grid.points,
            extent: grid.extent,
            axes,
            layout: "row-major".into(),
            dtype: "complex128-le".into(),
            header_doubles: 3,
        }
    }
}

/// Unnormalized multidimensional FFT, one axis at a time.
pub(crate) fn fft_nd(grid: &Grid2n, data: &mut [Complex64], inverse: bool) {
    let n = grid.points;
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let dim = grid.dim();
    let lines = data.len() / n;
    let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            data.par_chunks_mut(n).for_each(|line| fft.process(line));
            continue;
        }
        let src: &[Complex64] = data;
        buf.par_chunks_mut(n).enumerate().for_each(|(l, line)| {
            let base = (l / stride) * stride * n + l % stride;
            for (t, v) in line.iter_mut().enumerate() {
                *v = src[base + t * stride];
            }
        });
        buf.par_chunks_mut(n).for_each(|line| fft.process(line));
        for l in 0..lines {
            let base = (l / stride) * stride * n + l % stride;
            for t in 0..n {
                data[base + t * stride] = buf[l * n + t];
            }
        }
    }
}
