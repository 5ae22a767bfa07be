use rustfft::num_complex::Complex;

use super::grid::{Grid, GridWavefunction, Spectral};
use super::potential::PotentialFn;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Edge amplitude above which propagation aborts.
pub const BOUNDARY_LIMIT: f64 = 1e-6;

/// Strang-split propagator `e^{−iVdt/2ħ} · F⁻¹ e^{−iħk²dt/2m} F · e^{−iVdt/2ħ}`,
/// second order in `dt` and exactly unitary up to rounding.
pub struct SplitStepPropagator<T: Scalar> {
    grid: Grid<T>,
    dt: T,
    half_potential: Vec<Complex<T>>,
    /// Kinetic phase with the 1/n of the inverse FFT folded in.
    kinetic: Vec<Complex<T>>,
    spectral: Spectral<T>,
}

impl<T: Scalar> SplitStepPropagator<T> {
    pub fn new(grid: Grid<T>, potential: &PotentialFn<T>, mass: T, hbar: T, dt: T) -> Result<Self> {
        if !(dt.is_finite() && dt != T::zero()) {
            return Err(Error::StepSize(format!("dt must be finite and non-zero, got {dt}")));
        }
        if !(mass > T::zero() && hbar > T::zero()) {
            return Err(Error::Range(format!("mass and hbar must be positive (m = {mass}, ħ = {hbar})")));
        }
        let two = T::lit(2.0);
        let half_potential = grid
            .points()
            .map(|x| Complex::from_polar(T::one(), -potential.value(x) * dt / (two * hbar)))
            .collect();
        let inv_n = T::one() / T::lit(grid.len() as f64);
        let kinetic = grid
            .wavenumbers()
            .into_iter()
            .map(|k| Complex::from_polar(inv_n, -hbar * k * k * dt / (two * mass)))
            .collect();
        Ok(Self { grid, dt, half_potential, kinetic, spectral: Spectral::new(&grid) })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn step(&mut self, psi: &mut [Complex<T>]) {
        mul_assign(psi, &self.half_potential);
        self.spectral.forward(psi);
        mul_assign(psi, &self.kinetic);
        self.spectral.inverse(psi);
        mul_assign(psi, &self.half_potential);
    }

    /// Advances `steps` steps, checking the grid edges after each one.
    /// `t0` only labels the error.
    pub fn run(&mut self, psi: &mut GridWavefunction<T>, steps: usize, t0: T) -> Result<()> {
        if psi.grid() != &self.grid {
            return Err(Error::InvalidGrid("wavefunction and propagator grids differ".into()));
        }
        for i in 0..steps {
            self.step(psi.samples_mut());
            let edge = psi.edge_amplitude();
            if edge > T::lit(BOUNDARY_LIMIT) {
                return Err(Error::BoundaryContamination {
                    edge: edge.to_f64_lossy(),
                    time: (t0 + T::lit((i + 1) as f64) * self.dt).to_f64_lossy(),
                });
            }
        }
        Ok(())
    }
}

fn mul_assign<T: Scalar>(psi: &mut [Complex<T>], phase: &[Complex<T>]) {
    psi.iter_mut().zip(phase).for_each(|(z, p)| *z = *z * p);
}

/// Propagates a normalized `psi0` for `steps` steps of size `dt > 0`.
pub fn propagate<T: Scalar>(
    psi0: &GridWavefunction<T>,
    potential: &PotentialFn<T>,
    mass: T,
    hbar: T,
    dt: T,
    steps: usize,
) -> Result<GridWavefunction<T>> {
    if !(dt > T::zero()) {
        return Err(Error::StepSize(format!("dt must be positive, got {dt}")));
    }
    let deficit = (psi0.norm_sqr() - T::one()).abs();
    if deficit > crate::oracle::norm_tolerance::<T>() {
        return Err(Error::NormDeficit { deficit: deficit.to_f64_lossy() });
    }
    let mut psi = psi0.clone();
    if steps == 0 {
        return Ok(psi);
    }
    let mut prop = SplitStepPropagator::new(*psi0.grid(), potential, mass, hbar, dt)?;
    prop.run(&mut psi, steps, T::zero())?;
    Ok(psi)
}
