//! Independent numerical verifiers for the closed forms: a split-step
//! Fourier propagator with moment measurement on a uniform periodic grid,
//! and a fixed-step RK4 integrator for the quadratic moment equations.

mod checks;
mod grid;
mod moments;
mod ode;
mod potential;
pub mod snapshot;
mod split_step;

pub use checks::{
    convergence_report, verify_general_first_derivative, ConvergenceProblem, ConvergenceReport,
    ConvergenceRow, FirstDerivativeCheck,
};
pub use grid::{Grid, GridWavefunction, Spectral};
pub use moments::{measure_moments, MomentMeter, MomentSet};
pub use ode::{integrate_moment_odes, MomentOde, MAX_ODE_STEP};
pub use potential::PotentialFn;
pub use split_step::{propagate, SplitStepPropagator, BOUNDARY_LIMIT};

/// Allowed `|‖ψ‖² − 1|` for wavefunctions handed to the oracles.
pub const NORM_TOLERANCE: f64 = 1e-8;

// single precision cannot hold a norm to 1e-8; allow a few thousand ulps there
pub(crate) fn norm_tolerance<T: crate::Scalar>() -> T {
    T::lit(NORM_TOLERANCE).max(T::epsilon() * T::lit(4096.0))
}
