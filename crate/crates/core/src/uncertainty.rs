//! State and potential types, constants of motion and the generalized
//! uncertainty inequality.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Absolute slack allowed below `ħ²/4` in `Δx²Δp² − Δ_xp²`.
pub const UNCERTAINTY_TOLERANCE: f64 = 1e-9;

/// `|A|` at or below this is treated as the linear regime.
pub const DEFAULT_REGIME_EPS: f64 = 1e-12;

/// Second moments `(Δx², Δp², Δ_xp)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyState<T> {
    dx2: T,
    dp2: T,
    dxp: T,
}

impl<T: Scalar> UncertaintyState<T> {
    /// Validated constructor: both variances positive and
    /// `dx2·dp2 − dxp² ≥ ħ²/4` up to [`UNCERTAINTY_TOLERANCE`].
    pub fn new(dx2: T, dp2: T, dxp: T, hbar: T) -> Result<Self> {
        let s = Self::positive(dx2, dp2, dxp)?;
        let margin = check_generalized_uncertainty(&s, hbar);
        if margin < -violation_tolerance(&s) {
            return Err(Error::UncertaintyViolation { margin: margin.to_f64_lossy() });
        }
        Ok(s)
    }

    /// Checks positivity only; the uncertainty product is not checked.
    pub fn positive(dx2: T, dp2: T, dxp: T) -> Result<Self> {
        if !(dx2.is_finite() && dp2.is_finite() && dxp.is_finite()) {
            return Err(Error::InvalidState("non-finite component".into()));
        }
        if dx2 <= T::zero() || dp2 <= T::zero() {
            return Err(Error::InvalidState(format!("variances must be positive (dx2 = {dx2}, dp2 = {dp2})")));
        }
        Ok(Self { dx2, dp2, dxp })
    }

    /// No validation at all. Used for grid-measured moments, which may sit a
    /// hair below the Heisenberg bound.
    pub fn unchecked(dx2: T, dp2: T, dxp: T) -> Self {
        Self { dx2, dp2, dxp }
    }

    pub fn dx2(&self) -> T {
        self.dx2
    }

    pub fn dp2(&self) -> T {
        self.dp2
    }

    pub fn dxp(&self) -> T {
        self.dxp
    }

    /// `Δx²·Δp²`.
    pub fn product(&self) -> T {
        self.dx2 * self.dp2
    }

    /// `U = Δx²Δp² − Δ_xp²`.
    pub fn invariant_u(&self) -> T {
        self.dx2 * self.dp2 - self.dxp * self.dxp
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.dx2 - other.dx2)
            .abs()
            .max((self.dp2 - other.dp2).abs())
            .max((self.dxp - other.dxp).abs())
    }
}

/// Tolerance used by [`UncertaintyState::new`]: `1e-9` absolute, widened for
/// low-precision scalars.
pub(crate) fn violation_tolerance<T: Scalar>(s: &UncertaintyState<T>) -> T {
    T::lit(UNCERTAINTY_TOLERANCE).max(T::lit(16.0) * T::epsilon() * s.product())
}

/// `V(x) = A x² + B x + C` for a particle of mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub mass: T,
}

impl<T: Scalar> PotentialSpec<T> {
    pub fn new(a: T, b: T, c: T, mass: T) -> Result<Self> {
        let p = Self { a, b, c, mass };
        p.validate()?;
        Ok(p)
    }

    pub fn free(mass: T) -> Self {
        Self { a: T::zero(), b: T::zero(), c: T::zero(), mass }
    }

    /// `A = mω²/2`.
    pub fn harmonic(mass: T, omega: T) -> Self {
        Self { a: mass * omega * omega / T::lit(2.0), b: T::zero(), c: T::zero(), mass }
    }

    /// `A = −mω²/2`.
    pub fn inverted(mass: T, omega: T) -> Self {
        Self { a: -mass * omega * omega / T::lit(2.0), b: T::zero(), c: T::zero(), mass }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::InvalidPotential("coefficients must be finite".into()));
        }
        if !(self.mass.is_finite() && self.mass > T::zero()) {
            return Err(Error::InvalidPotential(format!("mass must be positive, got {}", self.mass)));
        }
        Ok(())
    }

    pub fn value(&self, x: T) -> T {
        (self.a * x + self.b) * x + self.c
    }
}

/// Qualitative class of a quadratic potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime<T> {
    Linear,
    Harmonic(T),
    Inverted(T),
}

impl<T: Scalar> Regime<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Linear => "linear",
            Regime::Harmonic(_) => "harmonic",
            Regime::Inverted(_) => "inverted",
        }
    }

    pub fn omega(&self) -> Option<T> {
        match *self {
            Regime::Linear => None,
            Regime::Harmonic(w) | Regime::Inverted(w) => Some(w),
        }
    }
}

/// The two conserved quantities of the quadratic moment equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants<T> {
    /// `K = Δp² + 2mA·Δx²`
    pub k: T,
    /// `U = Δx²Δp² − Δ_xp²`
    pub u: T,
}

/// Expectation values `(⟨x⟩, ⟨p⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint<T> {
    pub x: T,
    pub p: T,
}

impl<T: Scalar> PhasePoint<T> {
    pub fn new(x: T, p: T) -> Self {
        Self { x, p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsConfig<T> {
    pub hbar: T,
}

impl<T: Scalar> UnitsConfig<T> {
    pub fn new(hbar: T) -> Result<Self> {
        if !(hbar.is_finite() && hbar > T::zero()) {
            return Err(Error::InvalidPotential(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { hbar })
    }
}

impl<T: Scalar> Default for UnitsConfig<T> {
    fn default() -> Self {
        Self { hbar: T::one() }
    }
}

pub fn classify_regime<T: Scalar>(pot: &PotentialSpec<T>, eps: T) -> Result<Regime<T>> {
    pot.validate()?;
    if !(eps >= T::zero()) {
        return Err(Error::Range(format!("regime threshold must be non-negative, got {eps}")));
    }
    let two = T::lit(2.0);
    Ok(if pot.a.abs() <= eps {
        Regime::Linear
    } else if pot.a > T::zero() {
        Regime::Harmonic((two * pot.a / pot.mass).sqrt())
    } else {
        Regime::Inverted((-two * pot.a / pot.mass).sqrt())
    })
}

pub fn constants_of_motion<T: Scalar>(s: &UncertaintyState<T>, pot: &PotentialSpec<T>) -> Constants<T> {
    Constants {
        k: s.dp2 + T::lit(2.0) * pot.mass * pot.a * s.dx2,
        u: s.invariant_u(),
    }
}

/// `Δx²Δp² − Δ_xp² − ħ²/4`; negative means the state is unphysical.
pub fn check_generalized_uncertainty<T: Scalar>(s: &UncertaintyState<T>, hbar: T) -> T {
    s.invariant_u() - hbar * hbar / T::lit(4.0)
}

/// Sign of `d(Δx²)/dt = 2Δ_xp/m`: `Greater` spreading, `Less` narrowing.
/// Holds for any potential, not just quadratic ones.
pub fn spreading_sign<T: Scalar>(s: &UncertaintyState<T>) -> Ordering {
    s.dxp.partial_cmp(&T::zero()).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(dx2: f64, dp2: f64, dxp: f64) -> UncertaintyState<f64> {
        UncertaintyState::new(dx2, dp2, dxp, 1.0).unwrap()
    }

    #[test]
    fn classify_examples() {
        let eps = DEFAULT_REGIME_EPS;
        assert_eq!(classify_regime(&PotentialSpec::free(1.0), 0.0).unwrap(), Regime::Linear);
        assert_eq!(
            classify_regime(&PotentialSpec::new(0.5, 0.0, 0.0, 1.0).unwrap(), eps).unwrap(),
            Regime::Harmonic(1.0)
        );
        assert_eq!(
            classify_regime(&PotentialSpec::new(-0.5, 0.0, 0.0, 1.0).unwrap(), eps).unwrap(),
            Regime::Inverted(1.0)
        );
        // below threshold counts as linear
        let tiny = PotentialSpec { a: 1e-13, b: 0.0, c: 0.0, mass: 1.0 };
        assert_eq!(classify_regime(&tiny, eps).unwrap(), Regime::Linear);
    }

    #[test]
    fn classify_rejects_bad_potentials() {
        let nan = PotentialSpec { a: f64::NAN, b: 0.0, c: 0.0, mass: 1.0 };
        assert!(matches!(classify_regime(&nan, 0.0), Err(Error::InvalidPotential(_))));
        let massless = PotentialSpec { a: 0.5, b: 0.0, c: 0.0, mass: 0.0 };
        assert!(matches!(classify_regime(&massless, 0.0), Err(Error::InvalidPotential(_))));
        assert!(PotentialSpec::new(0.5, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn constants_examples() {
        let c = constants_of_motion(&st(1.0, 1.0, 0.0), &PotentialSpec::free(1.0));
        assert_eq!((c.k, c.u), (1.0, 1.0));

        // coherent state: K = mωħ, U = ħ²/4
        let c = constants_of_motion(&st(0.5, 0.5, 0.0), &PotentialSpec::harmonic(1.0, 1.0));
        assert_eq!((c.k, c.u), (1.0, 0.25));

        let c = constants_of_motion(&st(0.5, 1.0, 0.5), &PotentialSpec::free(1.0));
        assert_eq!((c.k, c.u), (1.0, 0.25));
    }

    #[test]
    fn generalized_inequality_margin() {
        assert_eq!(check_generalized_uncertainty(&st(0.5, 0.5, 0.0), 1.0), 0.0);
        assert_eq!(check_generalized_uncertainty(&st(1.0, 1.0, 0.0), 1.0), 0.75);
    }

    #[test]
    fn validated_constructor() {
        assert!(matches!(
            UncertaintyState::new(0.5, 0.4, 0.0, 1.0),
            Err(Error::UncertaintyViolation { .. })
        ));
        // within the 1e-9 slack
        assert!(UncertaintyState::new(0.5, 0.5 - 1e-10, 0.0, 1.0).is_ok());
        assert!(matches!(UncertaintyState::new(0.0, 1.0, 0.0, 1.0), Err(Error::InvalidState(_))));
        assert!(matches!(UncertaintyState::new(1.0, f64::INFINITY, 0.0, 1.0), Err(Error::InvalidState(_))));
        let raw = UncertaintyState::unchecked(0.5, 0.4, 0.0);
        assert!(check_generalized_uncertainty(&raw, 1.0) < 0.0);
    }

    #[test]
    fn spreading_sign_examples() {
        assert_eq!(spreading_sign(&st(1.0, 1.0, 0.0)), Ordering::Equal);
        assert_eq!(spreading_sign(&st(1.0, 2.0, -1.0)), Ordering::Less);
        assert_eq!(spreading_sign(&st(1.0, 2.0, 1.0)), Ordering::Greater);
    }

    proptest! {
        #[test]
        fn omega_is_sqrt_two_abs_a_over_m(a in -50.0f64..50.0, m in 0.01f64..100.0) {
            prop_assume!(a.abs() > 1e-9);
            let pot = PotentialSpec::new(a, 0.0, 0.0, m).unwrap();
            let w = classify_regime(&pot, 0.0).unwrap().omega().unwrap();
            prop_assert_eq!(w, (2.0 * a.abs() / m).sqrt());
        }

        #[test]
        fn scaling_a_and_m_together_keeps_omega(a in -5.0f64..5.0, m in 0.1f64..10.0, f in 0.1f64..10.0) {
            prop_assume!(a.abs() > 1e-6);
            let w1 = classify_regime(&PotentialSpec::new(a, 0.0, 0.0, m).unwrap(), 0.0).unwrap().omega().unwrap();
            let w2 = classify_regime(&PotentialSpec::new(a * f, 0.0, 0.0, m * f).unwrap(), 0.0).unwrap().omega().unwrap();
            prop_assert!((w1 - w2).abs() <= 4.0 * f64::EPSILON * w1);
        }
    }
}
