use rustfft::num_complex::Complex;

use super::grid::{GridWavefunction, Spectral};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::uncertainty::{PhasePoint, UncertaintyState};

/// First and second moments of a normalized wavefunction.
///
/// The variances and the covariance are accumulated about the means rather
/// than derived from the raw moments, so they stay accurate for packets far
/// from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet<T> {
    pub mean_x: T,
    pub mean_p: T,
    pub mean_x2: T,
    pub mean_p2: T,
    /// `⟨x̂p̂ + p̂x̂⟩/2`
    pub mean_sym_xp: T,
    var_x: T,
    var_p: T,
    cov_xp: T,
}

impl<T: Scalar> MomentSet<T> {
    pub fn state(&self) -> UncertaintyState<T> {
        UncertaintyState::unchecked(self.var_x, self.var_p, self.cov_xp)
    }

    pub fn phase_point(&self) -> PhasePoint<T> {
        PhasePoint::new(self.mean_x, self.mean_p)
    }

    /// Componentwise Richardson step `(4·self − coarse)/3` for a second-order
    /// method, `self` computed at half the step of `coarse`.
    pub fn extrapolate(&self, coarse: &Self) -> Self {
        let three = T::lit(3.0);
        let r = |f: T, c: T| (T::lit(4.0) * f - c) / three;
        Self {
            mean_x: r(self.mean_x, coarse.mean_x),
            mean_p: r(self.mean_p, coarse.mean_p),
            mean_x2: r(self.mean_x2, coarse.mean_x2),
            mean_p2: r(self.mean_p2, coarse.mean_p2),
            mean_sym_xp: r(self.mean_sym_xp, coarse.mean_sym_xp),
            var_x: r(self.var_x, coarse.var_x),
            var_p: r(self.var_p, coarse.var_p),
            cov_xp: r(self.cov_xp, coarse.cov_xp),
        }
    }
}

/// Reusable measurement workspace for one grid size.
pub struct MomentMeter<T: Scalar> {
    spectral: Spectral<T>,
    hbar: T,
}

impl<T: Scalar> MomentMeter<T> {
    pub fn new(psi: &GridWavefunction<T>, hbar: T) -> Self {
        Self { spectral: Spectral::new(psi.grid()), hbar }
    }

    /// Position moments by quadrature, momentum moments from the spectrum,
    /// and the symmetrized covariance as `Re ∫ψ*(x − ⟨x⟩)(−iħ∂ₓψ) dx`.
    pub fn measure(&mut self, psi: &GridWavefunction<T>) -> Result<MomentSet<T>> {
        let grid = psi.grid();
        let dx = grid.dx();
        let norm = psi.norm_sqr();
        let deficit = (norm - T::one()).abs();
        if deficit > crate::oracle::norm_tolerance::<T>() {
            return Err(Error::NormDeficit { deficit: deficit.to_f64_lossy() });
        }
        let samples = psi.samples();
        let sum = |f: &dyn Fn(usize) -> T| (0..samples.len()).map(f).fold(T::zero(), |a, b| a + b);

        let density = |j: usize| samples[j].norm_sqr() * dx / norm;
        let mean_x = sum(&|j| grid.x(j) * density(j));
        let var_x = sum(&|j| (grid.x(j) - mean_x).powi(2) * density(j));

        let mut spec = samples.to_vec();
        self.spectral.forward(&mut spec);
        let k = self.spectral.wavenumbers();
        let total = spec.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        let hbar = self.hbar;
        let weight = |j: usize| spec[j].norm_sqr() / total;
        let mean_p = sum(&|j| hbar * k[j] * weight(j));
        let var_p = sum(&|j| (hbar * k[j] - mean_p).powi(2) * weight(j));

        let deriv = self.spectral.derivative(samples);
        // ψ*·(−iħψ′) = ħ·ψ*·(−i)ψ′; real part = ħ·Im(ψ*ψ′)
        let covariance_density = |j: usize, z: Complex<T>| (samples[j].conj() * z).im * hbar * dx / norm;
        let cov_xp = sum(&|j| (grid.x(j) - mean_x) * covariance_density(j, deriv[j]));

        Ok(MomentSet {
            mean_x,
            mean_p,
            mean_x2: var_x + mean_x * mean_x,
            mean_p2: var_p + mean_p * mean_p,
            mean_sym_xp: cov_xp + mean_x * mean_p,
            var_x,
            var_p,
            cov_xp,
        })
    }
}

pub fn measure_moments<T: Scalar>(psi: &GridWavefunction<T>, hbar: T) -> Result<MomentSet<T>> {
    MomentMeter::new(psi, hbar).measure(psi)
}
