//! Chirped Gaussian packets
//! `ψ(x) = (πα)^{-1/4} exp(−(x−x₀)²/2α + ip₀(x−x₀)/ħ + ia(x−x₀)² + iφ)`
//! and their relation to the second moments.
//!
//! For every Gaussian `Δx² = α/2`, `Δ_xp = 2aħΔx²`,
//! `Δp² = ħ²/(4Δx²) + 4a²ħ²Δx²`, hence `U = ħ²/4` exactly. Since `U` is
//! conserved, a Gaussian stays Gaussian in any at most quadratic potential
//! and its chirp can be read off the evolved moments as `a = Δ_xp/(2ħΔx²)`.

use rustfft::num_complex::Complex;

use crate::analytic::{canonical_orbit_state, classical_trajectory, evolve, CanonicalOrbit};
use crate::error::{Error, Result};
use crate::oracle::{Grid, GridWavefunction, Spectral};
use crate::scalar::{cosh_m1, cosh_sinh, Scalar};
use crate::uncertainty::{PhasePoint, PotentialSpec, Regime, UncertaintyState};

/// Default `|U − ħ²/4|` tolerance of [`gaussian_from_moments`], in units of ħ².
pub const GAUSSIAN_TOLERANCE: f64 = 1e-9;

/// Default relative tolerance of [`classify_gaussian`].
pub const CLASSIFY_TOLERANCE: f64 = 1e-9;

/// Half-width, in units of `√α`, that a grid must cover around `x₀`.
pub const COVERAGE_WIDTHS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams<T> {
    /// Width parameter `α = 2Δx²`.
    pub alpha: T,
    /// Chirp.
    pub a: T,
    pub x0: T,
    pub p0: T,
    /// Global phase; carried along, never evolved.
    pub phi: T,
}

impl<T: Scalar> GaussianParams<T> {
    pub fn new(alpha: T, a: T, x0: T, p0: T) -> Result<Self> {
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::InvalidState(format!("alpha must be positive, got {alpha}")));
        }
        if !(a.is_finite() && x0.is_finite() && p0.is_finite()) {
            return Err(Error::InvalidState("Gaussian parameters must be finite".into()));
        }
        Ok(Self { alpha, a, x0, p0, phi: T::zero() })
    }

    /// Ground-state width `α = ħ/(mω)`, no chirp.
    pub fn coherent(mass: T, omega: T, hbar: T, x0: T, p0: T) -> Result<Self> {
        Self::new(hbar / (mass * omega), T::zero(), x0, p0)
    }

    pub fn with_phase(mut self, phi: T) -> Self {
        self.phi = phi;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianClass {
    /// No chirp and `Δp² = m²ω²Δx²`: uncertainties constant in time.
    Coherent,
    /// No chirp, widths mismatched: uncertainties oscillate at `2ω`.
    Squeezed,
    General,
}

pub fn moments_from_gaussian<T: Scalar>(g: &GaussianParams<T>, hbar: T) -> (UncertaintyState<T>, PhasePoint<T>) {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let dx2 = g.alpha / two;
    let dxp = two * g.a * hbar * dx2;
    let dp2 = hbar * hbar / (four * dx2) + four * g.a * g.a * hbar * hbar * dx2;
    (UncertaintyState::unchecked(dx2, dp2, dxp), PhasePoint::new(g.x0, g.p0))
}

/// Inverse of [`moments_from_gaussian`]; `phi` is set to zero.
pub fn gaussian_from_moments<T: Scalar>(
    s: &UncertaintyState<T>,
    q: &PhasePoint<T>,
    hbar: T,
    tol: T,
) -> Result<GaussianParams<T>> {
    let excess = s.invariant_u() - hbar * hbar / T::lit(4.0);
    if !(excess.abs() <= tol) {
        return Err(Error::NotGaussian { excess: excess.to_f64_lossy() });
    }
    let two = T::lit(2.0);
    GaussianParams::new(two * s.dx2(), s.dxp() / (two * hbar * s.dx2()), q.x, q.p)
}

/// Gaussian parameters after time `t` in a quadratic potential, obtained
/// from the evolved moments and classical trajectory. `phi` is kept as is.
pub fn evolve_gaussian<T: Scalar>(
    g: &GaussianParams<T>,
    pot: &PotentialSpec<T>,
    hbar: T,
    t: T,
) -> Result<GaussianParams<T>> {
    let (s0, q0) = moments_from_gaussian(g, hbar);
    let s = evolve(&s0, pot, t)?;
    let q = classical_trajectory(&q0, pot, t)?;
    let tol = T::lit(GAUSSIAN_TOLERANCE).max(T::lit(64.0) * T::epsilon() * s.product()) * hbar * hbar;
    Ok(gaussian_from_moments(&s, &q, hbar, tol)?.with_phase(g.phi))
}

/// Chirp `a(τ)` on the Gaussian canonical orbit, `τ` measured from the
/// product minimum.
///
/// `k` is `K/(mωħ)` for the oscillators and `Δp₀²` itself for the linear
/// regime. The harmonic orbit needs `k ≥ 1` (`k = 1` is the coherent state,
/// chirp identically zero).
pub fn chirp_history<T: Scalar>(k: T, regime: Regime<T>, m: T, hbar: T, tau: T) -> Result<T> {
    let two = T::lit(2.0);
    match regime {
        Regime::Linear => {
            if !(k > T::zero()) {
                return Err(Error::InvalidOrbit(format!("linear chirp needs Δp₀² > 0, got {k}")));
            }
            let offset = (m * hbar / (two * k)).powi(2);
            Ok(m / (two * hbar) * tau / (tau * tau + offset))
        }
        Regime::Harmonic(w) => {
            if k < T::one() {
                return Err(Error::InvalidOrbit(format!("harmonic Gaussian orbit needs k ≥ 1, got {k}")));
            }
            let r = (k * k - T::one()).sqrt();
            let sin = (two * w * tau).sin();
            // k − r·cos = 1/(k + r) + 2r·sin²(ωτ)
            let denom = T::one() / (k + r) + two * r * (w * tau).sin().powi(2);
            Ok(m * w / (two * hbar) * r * sin / denom)
        }
        Regime::Inverted(w) => {
            let arg = two * w * tau;
            if !(arg.abs() <= T::lit(crate::analytic::MAX_HYPERBOLIC_ARG)) {
                return Err(Error::Range(format!("|2ωτ| = {} too large", arg.abs())));
            }
            let r = (k * k + T::one()).sqrt();
            let (_, sinh) = cosh_sinh(arg);
            // r·cosh − k = (r − k) + r(cosh − 1), with r − k = 1/(r + k) for k ≥ 0
            let r_minus_k = if k >= T::zero() { T::one() / (r + k) } else { r - k };
            Ok(m * w / (two * hbar) * r * sinh / (r_minus_k + r * cosh_m1(arg)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChirpExtrema<T> {
    Extrema { tau_max: T, a_max: T, tau_min: T, a_min: T },
    /// Chirp is monotonically increasing (inverted oscillator, `k ≤ 0`).
    Monotone,
    /// Chirp is identically zero (harmonic, `k = 1`).
    Constant,
}

/// Location and size of the chirp extrema on the Gaussian canonical orbit.
///
/// Harmonic: `cos(2ωτ_max) = √(k²−1)/k`, so `τ_max ∈ (0, π/(4ω))` and
/// `τ_min = π/ω − τ_max`. Inverted (`k > 0`): `cosh(2ωτ_max) = √(k²+1)/k`.
pub fn chirp_extrema<T: Scalar>(k: T, regime: Regime<T>, m: T, hbar: T) -> Result<ChirpExtrema<T>> {
    let two = T::lit(2.0);
    match regime {
        Regime::Linear => {
            if !(k > T::zero()) {
                return Err(Error::InvalidOrbit(format!("linear chirp needs Δp₀² > 0, got {k}")));
            }
            let tau_max = hbar * m / (two * k);
            let a_max = k / (two * hbar * hbar);
            Ok(ChirpExtrema::Extrema { tau_max, a_max, tau_min: -tau_max, a_min: -a_max })
        }
        Regime::Harmonic(w) => {
            if k < T::one() {
                return Err(Error::InvalidOrbit(format!("harmonic Gaussian orbit needs k ≥ 1, got {k}")));
            }
            if k == T::one() {
                return Ok(ChirpExtrema::Constant);
            }
            let r = (k * k - T::one()).sqrt();
            let tau_max = (r / k).acos() / (two * w);
            let a_max = m * w / (two * hbar) * r;
            Ok(ChirpExtrema::Extrema { tau_max, a_max, tau_min: T::PI() / w - tau_max, a_min: -a_max })
        }
        Regime::Inverted(w) => {
            if k <= T::zero() {
                return Ok(ChirpExtrema::Monotone);
            }
            let r = (k * k + T::one()).sqrt();
            let tau_max = (r / k).acosh() / (two * w);
            let a_max = m * w / (two * hbar) * r;
            Ok(ChirpExtrema::Extrema { tau_max, a_max, tau_min: -tau_max, a_min: -a_max })
        }
    }
}

/// Chirp of a canonical orbit computed from its moments, `Δ_xp/(2ħΔx²)`.
pub fn orbit_chirp<T: Scalar>(orbit: &CanonicalOrbit<T>, hbar: T, tau: T) -> Result<T> {
    let s = canonical_orbit_state(orbit, tau)?;
    Ok(s.dxp() / (T::lit(2.0) * hbar * s.dx2()))
}

pub fn classify_gaussian<T: Scalar>(g: &GaussianParams<T>, m: T, omega: T, hbar: T, tol: T) -> GaussianClass {
    if g.a.abs() > tol {
        return GaussianClass::General;
    }
    let (s, _) = moments_from_gaussian(g, hbar);
    let target = (m * omega).powi(2) * s.dx2();
    if (s.dp2() - target).abs() <= tol * target {
        GaussianClass::Coherent
    } else {
        GaussianClass::Squeezed
    }
}

/// Samples ψ on `grid`; the grid must cover `x₀ ± 8√α`.
pub fn sample_wavefunction<T: Scalar>(g: &GaussianParams<T>, grid: &Grid<T>, hbar: T) -> Result<GridWavefunction<T>> {
    let reach = T::lit(COVERAGE_WIDTHS) * g.alpha.sqrt();
    if g.x0 - reach < grid.x_min() || g.x0 + reach > grid.x_max() {
        return Err(Error::InsufficientCoverage(format!(
            "packet x0 = {} ± {} exceeds [{}, {}]",
            g.x0,
            reach,
            grid.x_min(),
            grid.x_max()
        )));
    }
    let prefactor = (T::PI() * g.alpha).powf(T::lit(-0.25));
    let two = T::lit(2.0);
    Ok(GridWavefunction::from_fn(*grid, |x| {
        let d = x - g.x0;
        let envelope = prefactor * (-d * d / (two * g.alpha)).exp();
        Complex::from_polar(envelope, g.p0 * d / hbar + g.a * d * d + g.phi)
    }))
}

/// `‖Âψ − λψ‖/‖ψ‖` with `Â = (mωx̂ + ip̂)/√2` and `λ = (mωx₀ + ip₀)/√2`,
/// evaluated with a spectral derivative. Zero exactly for coherent states.
pub fn coherent_eigenvalue_residual<T: Scalar>(
    g: &GaussianParams<T>,
    m: T,
    omega: T,
    hbar: T,
    grid: &Grid<T>,
) -> Result<T> {
    let psi = sample_wavefunction(g, grid, hbar)?;
    let norm = psi.norm_sqr();
    let deficit = (norm - T::one()).abs();
    if deficit > crate::oracle::norm_tolerance::<T>() {
        return Err(Error::GridUnderresolution { deficit: deficit.to_f64_lossy() });
    }
    let deriv = Spectral::new(grid).derivative(psi.samples());
    let mw = m * omega;
    let lambda = Complex::new(mw * g.x0, g.p0);
    let inv_sqrt2 = T::one() / T::lit(2.0).sqrt();
    let sum = grid
        .points()
        .zip(psi.samples().iter().zip(&deriv))
        .map(|(x, (&f, &df))| ((f * mw * x + df * hbar - lambda * f) * inv_sqrt2).norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    Ok((sum * grid.dx() / norm).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::measure_moments;
    use crate::uncertainty::check_generalized_uncertainty;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn g(alpha: f64, a: f64, x0: f64, p0: f64) -> GaussianParams<f64> {
        GaussianParams::new(alpha, a, x0, p0).unwrap()
    }

    /// Golden-section search for a maximum of `f` on `[lo, hi]`.
    fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        while hi - lo > 1e-11 {
            let c = hi - r * (hi - lo);
            let d = lo + r * (hi - lo);
            if f(c) > f(d) {
                hi = d
            } else {
                lo = c
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn moments_examples() {
        let (s, q) = moments_from_gaussian(&g(1.0, 0.0, 0.0, 0.0), 1.0);
        assert_eq!((s.dx2(), s.dp2(), s.dxp()), (0.5, 0.5, 0.0));
        assert_eq!(q, PhasePoint::new(0.0, 0.0));
        let (s, q) = moments_from_gaussian(&g(1.0, 0.5, 2.0, 3.0), 1.0);
        assert_eq!((s.dx2(), s.dp2(), s.dxp()), (0.5, 1.0, 0.5));
        assert_eq!(q, PhasePoint::new(2.0, 3.0));
        assert_eq!(check_generalized_uncertainty(&s, 1.0), 0.0);
    }

    #[test]
    fn from_moments_examples() {
        let q = PhasePoint::new(0.0, 0.0);
        let tol = GAUSSIAN_TOLERANCE;
        let r = gaussian_from_moments(&UncertaintyState::new(0.5, 0.5, 0.0, 1.0).unwrap(), &q, 1.0, tol).unwrap();
        assert_eq!((r.alpha, r.a), (1.0, 0.0));
        let r = gaussian_from_moments(&UncertaintyState::new(0.5, 1.0, 0.5, 1.0).unwrap(), &q, 1.0, tol).unwrap();
        assert_eq!((r.alpha, r.a), (1.0, 0.5));
        assert!(matches!(
            gaussian_from_moments(&UncertaintyState::new(1.0, 1.0, 0.0, 1.0).unwrap(), &q, 1.0, tol),
            Err(Error::NotGaussian { .. })
        ));
    }

    #[test]
    fn sampled_moments_match_formulas() {
        for p in [g(1.0, 0.0, 0.0, 0.0), g(1.0, 0.5, 0.0, 0.0), g(0.7, -0.3, 1.5, -2.0), g(2.0, 0.1, -1.0, 1.0)] {
            let half = 12.0 * p.alpha.sqrt();
            let grid = Grid::centered(p.x0, half, 4096).unwrap();
            let psi = sample_wavefunction(&p, &grid, 1.0).unwrap();
            let m = measure_moments(&psi, 1.0).unwrap();
            let (s, q) = moments_from_gaussian(&p, 1.0);
            assert!(m.state().max_abs_diff(&s) < 1e-8, "{p:?}");
            assert_abs_diff_eq!(m.mean_x, q.x, epsilon = 1e-8);
            assert_abs_diff_eq!(m.mean_p, q.p, epsilon = 1e-8);
        }
    }

    #[test]
    fn sampling_examples() {
        let grid = Grid::new(-12.0, 12.0, 2048).unwrap();
        let psi = sample_wavefunction(&g(1.0, 0.0, 0.0, 0.0), &grid, 1.0).unwrap();
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-10);

        let boosted = sample_wavefunction(&g(1.0, 0.0, 0.0, 5.0), &grid, 1.0).unwrap();
        for (a, b) in psi.samples().iter().zip(boosted.samples()) {
            assert_abs_diff_eq!(a.norm(), b.norm(), epsilon = 1e-15);
        }
        // phase gradient at the centre (x = 0 is sample 1024)
        let (l, r) = (boosted.samples()[1023], boosted.samples()[1025]);
        let grad = (r / l).arg() / (2.0 * grid.dx());
        assert_abs_diff_eq!(grad, 5.0, epsilon = 1e-12);

        let narrow = Grid::new(-5.0, 5.0, 256).unwrap();
        assert!(matches!(
            sample_wavefunction(&g(1.0, 0.0, 0.0, 0.0), &narrow, 1.0),
            Err(Error::InsufficientCoverage(_))
        ));
    }

    #[test]
    fn chirp_history_examples() {
        for &tau in &[-3.0f64, 0.0, 0.4, 2.0] {
            assert_eq!(chirp_history(1.0, Regime::Harmonic(1.0), 1.0, 1.0, tau).unwrap(), 0.0);
            assert_abs_diff_eq!(
                chirp_history(0.0, Regime::Inverted(1.0), 1.0, 1.0, tau).unwrap(),
                (2.0 * tau).tanh() / 2.0,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(chirp_history(0.5, Regime::Linear, 1.0, 1.0, 1.0).unwrap(), 0.25, epsilon = 1e-16);
        assert_abs_diff_eq!(chirp_history(0.0, Regime::Inverted(1.0), 1.0, 1.0, 30.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(chirp_history(0.0, Regime::Inverted(1.0), 1.0, 1.0, -30.0).unwrap(), -0.5, epsilon = 1e-15);
        assert!(chirp_history(0.9, Regime::Harmonic(1.0), 1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn chirp_extrema_examples() {
        let s2 = 2f64.sqrt();
        // maximum of the orbit chirp Δ_xp/(2ħΔx²), found numerically
        let orbit = CanonicalOrbit::gaussian(Regime::Harmonic(1.0), 1.0, 1.0, s2).unwrap();
        let tau_num = golden_max(|t| orbit_chirp(&orbit, 1.0, t).unwrap(), 0.0, PI / 2.0);
        match chirp_extrema(s2, Regime::Harmonic(1.0), 1.0, 1.0).unwrap() {
            ChirpExtrema::Extrema { tau_max, a_max, tau_min, a_min } => {
                assert_abs_diff_eq!(tau_max, PI / 8.0, epsilon = 1e-15);
                assert_abs_diff_eq!(tau_max, tau_num, epsilon = 1e-8);
                assert_abs_diff_eq!(a_max, 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(tau_min, PI - PI / 8.0, epsilon = 1e-15);
                assert_abs_diff_eq!(a_min, -0.5, epsilon = 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(chirp_extrema(0.0, Regime::Inverted(1.0), 1.0, 1.0).unwrap(), ChirpExtrema::Monotone);
        assert_eq!(chirp_extrema(-2.0, Regime::Inverted(1.0), 1.0, 1.0).unwrap(), ChirpExtrema::Monotone);
        assert_eq!(chirp_extrema(1.0, Regime::Harmonic(1.0), 1.0, 1.0).unwrap(), ChirpExtrema::Constant);
        assert!(chirp_extrema(0.5, Regime::Harmonic(1.0), 1.0, 1.0).is_err());

        let tau_num = golden_max(|t| chirp_history(1.0, Regime::Inverted(1.0), 1.0, 1.0, t).unwrap(), 0.0, 3.0);
        match chirp_extrema(1.0, Regime::Inverted(1.0), 1.0, 1.0).unwrap() {
            ChirpExtrema::Extrema { tau_max, a_max, .. } => {
                assert_abs_diff_eq!(tau_max, 0.5 * s2.acosh(), epsilon = 1e-15);
                assert_abs_diff_eq!(tau_max, 0.44069, epsilon = 1e-5);
                assert_abs_diff_eq!(tau_max, tau_num, epsilon = 1e-8);
                assert_abs_diff_eq!(a_max, s2 / 2.0, epsilon = 1e-15);
            }
            other => panic!("{other:?}"),
        }

        match chirp_extrema(0.5, Regime::Linear, 1.0, 1.0).unwrap() {
            ChirpExtrema::Extrema { tau_max, a_max, tau_min, a_min } => {
                assert_eq!((tau_max, a_max, tau_min, a_min), (1.0, 0.25, -1.0, -0.25));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_gaussian(&g(1.0, 0.0, 0.0, 0.0), 1.0, 1.0, 1.0, 1e-9), GaussianClass::Coherent);
        assert_eq!(classify_gaussian(&g(4.0, 0.0, 0.0, 0.0), 1.0, 1.0, 1.0, 1e-9), GaussianClass::Squeezed);
        assert_eq!(classify_gaussian(&g(1.0, 0.3, 0.0, 0.0), 1.0, 1.0, 1.0, 1e-9), GaussianClass::General);
        assert_eq!(
            classify_gaussian(&GaussianParams::coherent(2.0, 0.7, 1.3, 1.0, 0.5).unwrap(), 2.0, 0.7, 1.3, 1e-9),
            GaussianClass::Coherent
        );
    }

    #[test]
    fn annihilation_residual() {
        let grid = Grid::new(-20.0, 20.0, 4096).unwrap();
        let coherent = GaussianParams::coherent(1.0, 1.0, 1.0, 1.3, -0.7).unwrap();
        assert!(coherent_eigenvalue_residual(&coherent, 1.0, 1.0, 1.0, &grid).unwrap() <= 1e-8);
        let squeezed = g(4.0, 0.0, 0.0, 0.0);
        let r = coherent_eigenvalue_residual(&squeezed, 1.0, 1.0, 1.0, &grid).unwrap();
        assert!(r > 0.1);
        assert_abs_diff_eq!(r, 0.75, epsilon = 1e-8);
        let chirped = g(1.0, 0.2, 0.0, 0.0);
        assert!(coherent_eigenvalue_residual(&chirped, 1.0, 1.0, 1.0, &grid).unwrap() > 1e-3);

        // resolution too coarse for a very narrow packet
        let coarse = Grid::new(-20.0, 20.0, 256).unwrap();
        assert!(matches!(
            coherent_eigenvalue_residual(&g(1e-3, 0.0, 0.0, 0.0), 1.0, 1.0, 1.0, &coarse),
            Err(Error::GridUnderresolution { .. })
        ));
    }

    #[test]
    fn gaussian_closure_under_evolution() {
        let p = g(0.8, -0.4, 1.0, 0.5);
        for pot in [PotentialSpec::free(1.0), PotentialSpec::harmonic(1.0, 1.2), PotentialSpec::inverted(1.5, 0.6)] {
            for &t in &[-1.0, 0.5, 2.0] {
                let e = evolve_gaussian(&p, &pot, 1.0, t).unwrap();
                assert!(e.alpha > 0.0);
            }
        }
    }

    prop_compose! {
        fn arb_gaussian()(alpha in 0.05f64..20.0, a in -3.0f64..3.0, x0 in -5.0f64..5.0, p0 in -5.0f64..5.0)
            -> GaussianParams<f64> {
            GaussianParams::new(alpha, a, x0, p0).unwrap()
        }
    }

    proptest! {
        #[test]
        fn round_trip(p in arb_gaussian(), hbar in 0.5f64..2.0) {
            let (s, q) = moments_from_gaussian(&p, hbar);
            prop_assert!((check_generalized_uncertainty(&s, hbar)).abs() <= 1e-14 * s.product().max(1.0));
            let back = gaussian_from_moments(&s, &q, hbar, 1e-9 * hbar * hbar).unwrap();
            prop_assert!((back.alpha - p.alpha).abs() <= 1e-12 * p.alpha);
            prop_assert!((back.a - p.a).abs() <= 1e-12 * p.a.abs().max(1.0));
            prop_assert_eq!((back.x0, back.p0), (p.x0, p.p0));
        }

        #[test]
        fn chirp_matches_orbit_moments(k in 1.0f64..6.0, kinv in -4.0f64..4.0, p2 in 0.1f64..4.0,
                                       w in 0.3f64..2.0, m in 0.5f64..2.0, tau in -5.0f64..5.0) {
            for (regime, kk) in [(Regime::Linear, p2), (Regime::Harmonic(w), k), (Regime::Inverted(w), kinv)] {
                if let Regime::Inverted(_) = regime { prop_assume!(2.0 * w * tau.abs() < 20.0) }
                let orbit = CanonicalOrbit::gaussian(regime, m, 1.0, kk).unwrap();
                let a = chirp_history(kk, regime, m, 1.0, tau).unwrap();
                let b = orbit_chirp(&orbit, 1.0, tau).unwrap();
                prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{regime:?} {a} {b}");
                // odd in τ
                let am = chirp_history(kk, regime, m, 1.0, -tau).unwrap();
                prop_assert!((a + am).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }

        #[test]
        fn evolved_gaussians_stay_gaussian(p in arb_gaussian(), kind in 0u8..3, t in -3.0f64..3.0) {
            let pot = match kind {
                0 => PotentialSpec::free(1.0),
                1 => PotentialSpec::harmonic(1.0, 0.9),
                _ => PotentialSpec::inverted(1.0, 0.5),
            };
            prop_assert!(evolve_gaussian(&p, &pot, 1.0, t).is_ok());
        }

        #[test]
        fn extrema_are_local_maxima(k in 1.01f64..8.0, kinv in 0.05f64..8.0, p2 in 0.1f64..4.0, w in 0.3f64..2.0) {
            for (regime, kk) in [(Regime::Linear, p2), (Regime::Harmonic(w), k), (Regime::Inverted(w), kinv)] {
                if let ChirpExtrema::Extrema { tau_max, a_max, .. } = chirp_extrema(kk, regime, 1.0, 1.0).unwrap() {
                    let at = |t: f64| chirp_history(kk, regime, 1.0, 1.0, t).unwrap();
                    prop_assert!((at(tau_max) - a_max).abs() <= 1e-10 * a_max);
                    prop_assert!(at(tau_max + 1e-4) < at(tau_max));
                    prop_assert!(at(tau_max - 1e-4) < at(tau_max));
                }
            }
        }

        #[test]
        fn linear_chirp_decays(p2 in 0.1f64..4.0, tau in 0.01f64..1e4) {
            let a = chirp_history(p2, Regime::Linear, 1.0, 1.0, tau).unwrap();
            prop_assert!(a.abs() <= 1.0 / (2.0 * tau.abs()));
        }
    }
}
