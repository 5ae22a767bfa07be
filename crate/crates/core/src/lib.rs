//! Uncertainty dynamics of one-dimensional wave packets in at most quadratic
//! potentials `V(x) = A x² + B x + C`.
//!
//! The crate evolves the position variance, momentum variance and mixed
//! uncertainty `(Δx², Δp², Δ_xp)` in closed form for the linear, harmonic
//! and inverted-harmonic regimes, relates them to the parameters of chirped
//! Gaussian packets, and ships two independent numerical oracles: a fixed-step
//! RK4 integrator for the moment equations and a split-step Fourier
//! propagator for the Schrödinger equation on a uniform grid.
//!
//! All math is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below are what most callers want.

pub mod analytic;
pub mod error;
pub mod gaussian;
pub mod oracle;
pub mod scalar;
pub mod uncertainty;

pub use analytic::{
    canonical_orbit_state, classical_trajectory, evolve, evolve_harmonic, evolve_inverted,
    evolve_linear, narrowing_time_bound, narrowing_time_bound_from_product, time_of_zero_mixed,
    CanonicalOrbit, ZkState,
};
pub use error::{Error, Result};
pub use gaussian::{
    chirp_extrema, chirp_history, classify_gaussian, coherent_eigenvalue_residual, evolve_gaussian,
    gaussian_from_moments, moments_from_gaussian, orbit_chirp, sample_wavefunction, ChirpExtrema,
    GaussianClass, GaussianParams,
};
pub use oracle::{
    convergence_report, integrate_moment_odes, measure_moments, propagate,
    verify_general_first_derivative, ConvergenceProblem, ConvergenceReport, Grid,
    GridWavefunction, MomentSet, PotentialFn, SplitStepPropagator,
};
pub use rustfft::num_complex::Complex;
pub use scalar::Scalar;
pub use uncertainty::{
    check_generalized_uncertainty, classify_regime, constants_of_motion, spreading_sign,
    Constants, PhasePoint, PotentialSpec, Regime, UncertaintyState, UnitsConfig,
    DEFAULT_REGIME_EPS, UNCERTAINTY_TOLERANCE,
};

pub type UncertaintyState64 = UncertaintyState<f64>;
pub type UncertaintyState32 = UncertaintyState<f32>;
pub type PotentialSpec64 = PotentialSpec<f64>;
pub type PotentialSpec32 = PotentialSpec<f32>;
pub type Regime64 = Regime<f64>;
pub type Constants64 = Constants<f64>;
pub type PhasePoint64 = PhasePoint<f64>;
pub type PhasePoint32 = PhasePoint<f32>;
pub type CanonicalOrbit64 = CanonicalOrbit<f64>;
pub type GaussianParams64 = GaussianParams<f64>;
pub type GaussianParams32 = GaussianParams<f32>;
pub type Grid64 = Grid<f64>;
pub type GridWavefunction64 = GridWavefunction<f64>;
pub type MomentSet64 = MomentSet<f64>;
