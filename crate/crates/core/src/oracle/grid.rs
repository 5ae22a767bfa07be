use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform periodic grid `x_j = x_min + j·dx`, `dx = (x_max − x_min)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    x_min: T,
    x_max: T,
    n: usize,
}

impl<T: Scalar> Grid<T> {
    pub const MIN_POINTS: usize = 256;

    pub fn new(x_min: T, x_max: T, n: usize) -> Result<Self> {
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two ≥ {}", Self::MIN_POINTS)));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidGrid(format!("bad domain [{x_min}, {x_max}]")));
        }
        Ok(Self { x_min, x_max, n })
    }

    /// `[centre − half_width, centre + half_width)`.
    pub fn centered(centre: T, half_width: T, n: usize) -> Result<Self> {
        Self::new(centre - half_width, centre + half_width, n)
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> T {
        self.length() / T::lit(self.n as f64)
    }

    pub fn x(&self, j: usize) -> T {
        self.x_min + T::lit(j as f64) * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |j| self.x(j))
    }

    /// Angular wavenumbers in FFT order; the Nyquist entry is negative.
    pub fn wavenumbers(&self) -> Vec<T> {
        let dk = T::lit(2.0) * T::PI() / self.length();
        let n = self.n;
        (0..n)
            .map(|j| {
                let idx = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                T::lit(idx) * dk
            })
            .collect()
    }

    pub fn k_max(&self) -> T {
        T::PI() / self.dx()
    }
}

/// Samples of ψ on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction<T> {
    grid: Grid<T>,
    samples: Vec<Complex<T>>,
}

impl<T: Scalar> GridWavefunction<T> {
    pub fn new(grid: Grid<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("{} samples for {} grid points", samples.len(), grid.len())));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> Complex<T>) -> Self {
        let samples = grid.points().map(f).collect();
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.samples
    }

    /// `∫|ψ|² dx` by the trapezoidal rule (periodic, so a plain sum).
    pub fn norm_sqr(&self) -> T {
        self.samples.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b) * self.grid.dx()
    }

    pub fn normalize(&mut self) {
        let s = self.norm_sqr().sqrt();
        if s > T::zero() {
            let inv = T::one() / s;
            self.samples.iter_mut().for_each(|z| *z = *z * inv);
        }
    }

    /// Largest `|ψ|` within the outer 1/32 of the domain on either side.
    pub fn edge_amplitude(&self) -> T {
        let band = (self.samples.len() / 32).max(4);
        let n = self.samples.len();
        self.samples[..band]
            .iter()
            .chain(&self.samples[n - band..])
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    /// `a·ψ₁ + b·ψ₂` on a shared grid, renormalized.
    pub fn superpose(&self, other: &Self, a: Complex<T>, b: Complex<T>) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("superposed wavefunctions live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        let mut out = Self { grid: self.grid, samples };
        out.normalize();
        Ok(out)
    }
}

/// FFT plans plus wavenumbers for one grid size; spectral derivatives.
pub struct Spectral<T: Scalar> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    k: Vec<T>,
    scratch: Vec<Complex<T>>,
}

impl<T: Scalar> Spectral<T> {
    pub fn new(grid: &Grid<T>) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.len());
        let inverse = planner.plan_fft_inverse(grid.len());
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Self { forward, inverse, k: grid.wavenumbers(), scratch: vec![Complex::default(); scratch_len] }
    }

    pub fn wavenumbers(&self) -> &[T] {
        &self.k
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&mut self, buf: &mut [Complex<T>]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    /// Unnormalized inverse transform in place (caller divides by n).
    pub fn inverse(&mut self, buf: &mut [Complex<T>]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
    }

    /// `∂ψ/∂x` by multiplication with `ik`; the Nyquist mode is dropped.
    pub fn derivative(&mut self, psi: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = psi.len();
        let mut buf = psi.to_vec();
        self.forward(&mut buf);
        let inv_n = T::one() / T::lit(n as f64);
        for (j, (z, &k)) in buf.iter_mut().zip(&self.k).enumerate() {
            *z = if j == n / 2 { Complex::default() } else { Complex::new(-z.im * k, z.re * k) * inv_n };
        }
        self.inverse(&mut buf);
        buf
    }
}
