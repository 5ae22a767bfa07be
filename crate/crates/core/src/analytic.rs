//! Closed-form evolution of the second moments and of the classical phase
//! point in the three quadratic regimes.
//!
//! The harmonic and inverted cases are solved in the `(K, Z)` variables,
//! `K` being the conserved combination of the variances and `Z` the other
//! one, so that `K` is preserved exactly by construction:
//!
//! | regime   | `K`                | `Z`                |
//! |----------|--------------------|--------------------|
//! | harmonic | `Δp² + m²ω²Δx²`    | `Δp² − m²ω²Δx²`    |
//! | inverted | `Δp² − m²ω²Δx²`    | `Δp² + m²ω²Δx²`    |
//!
//! Negative times are allowed everywhere.

use crate::error::{Error, Result};
use crate::scalar::{cosh_m1, cosh_sinh, Scalar};
use crate::uncertainty::{
    classify_regime, constants_of_motion, PhasePoint, PotentialSpec, Regime, UncertaintyState,
    DEFAULT_REGIME_EPS,
};

/// Largest `|2ωt|` accepted before `cosh` would overflow an `f64`-sized
/// computation.
pub const MAX_HYPERBOLIC_ARG: f64 = 350.0;

/// Regime-dependent `(K, Z)` pair, see the module docs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZkState<T> {
    pub k: T,
    pub z: T,
}

impl<T: Scalar> ZkState<T> {
    pub fn harmonic(s: &UncertaintyState<T>, m: T, omega: T) -> Self {
        let mw2 = (m * omega).powi(2);
        Self { k: s.dp2() + mw2 * s.dx2(), z: s.dp2() - mw2 * s.dx2() }
    }

    pub fn inverted(s: &UncertaintyState<T>, m: T, omega: T) -> Self {
        let mw2 = (m * omega).powi(2);
        Self { k: s.dp2() - mw2 * s.dx2(), z: s.dp2() + mw2 * s.dx2() }
    }
}

/// Free particle or linear potential: `Δp²` is constant,
/// `Δx²(t) = Δx₀² + (t/m)²Δp₀² + 2(t/m)Δ⁰ₓₚ`, `Δ_xp(t) = Δ⁰ₓₚ + (t/m)Δp₀²`.
pub fn evolve_linear<T: Scalar>(s0: &UncertaintyState<T>, m: T, t: T) -> UncertaintyState<T> {
    let tm = t / m;
    let dp2 = s0.dp2();
    let dx2 = s0.dx2() + tm * (tm * dp2 + T::lit(2.0) * s0.dxp());
    let dxp = s0.dxp() + tm * dp2;
    UncertaintyState::unchecked(dx2, dp2, dxp)
}

/// Harmonic oscillator `A = mω²/2`; every component has period `π/ω`.
pub fn evolve_harmonic<T: Scalar>(s0: &UncertaintyState<T>, m: T, omega: T, t: T) -> UncertaintyState<T> {
    let two = T::lit(2.0);
    let mw = m * omega;
    let ZkState { k, z: z0 } = ZkState::harmonic(s0, m, omega);
    let (sin, cos) = (two * omega * t).sin_cos();
    let z = z0 * cos - s0.dxp() * two * mw * sin;
    let dxp = s0.dxp() * cos + z0 / (two * mw) * sin;
    let (k_minus_z, k_plus_z) = split_pair(k, z, variance_product(mw, s0.invariant_u(), dxp));
    UncertaintyState::unchecked(k_minus_z / (two * mw * mw), k_plus_z / two, dxp)
}

/// `4m²ω²·Δx²Δp² = 4m²ω²(U + Δ_xp²)`, which equals `(K − Z)(K + Z)` for the
/// harmonic and `(Z − K)(Z + K)` for the inverted variables.
fn variance_product<T: Scalar>(mw: T, u: T, dxp: T) -> T {
    T::lit(4.0) * mw * mw * (u + dxp * dxp)
}

/// `(p − q, p + q)` given their product: the larger factor is formed
/// directly and the smaller one divided out, so neither cancels.
fn split_pair<T: Scalar>(p: T, q: T, product: T) -> (T, T) {
    if q >= T::zero() {
        let plus = p + q;
        (product / plus, plus)
    } else {
        let minus = p - q;
        (minus, product / minus)
    }
}

/// Inverted oscillator `A = −mω²/2`; `Δ_xp` is strictly increasing.
pub fn evolve_inverted<T: Scalar>(
    s0: &UncertaintyState<T>,
    m: T,
    omega: T,
    t: T,
) -> Result<UncertaintyState<T>> {
    let two = T::lit(2.0);
    let arg = two * omega * t;
    check_hyperbolic_arg(arg)?;
    let mw = m * omega;
    let ZkState { k, z: z0 } = ZkState::inverted(s0, m, omega);
    let (cosh, sinh) = cosh_sinh(arg);
    let z = z0 * cosh + s0.dxp() * two * mw * sinh;
    let dxp = s0.dxp() * cosh + z0 / (two * mw) * sinh;
    let (z_minus_k, z_plus_k) = split_pair(z, k, variance_product(mw, s0.invariant_u(), dxp));
    Ok(UncertaintyState::unchecked(z_minus_k / (two * mw * mw), z_plus_k / two, dxp))
}

fn check_hyperbolic_arg<T: Scalar>(arg: T) -> Result<()> {
    if !(arg.abs() <= T::lit(MAX_HYPERBOLIC_ARG)) {
        return Err(Error::Range(format!("|2ωt| = {} exceeds {MAX_HYPERBOLIC_ARG}", arg.abs())));
    }
    Ok(())
}

/// Dispatches on the regime of `pot` (threshold [`DEFAULT_REGIME_EPS`]).
/// `B` and `C` do not enter.
pub fn evolve<T: Scalar>(s0: &UncertaintyState<T>, pot: &PotentialSpec<T>, t: T) -> Result<UncertaintyState<T>> {
    match classify_regime(pot, T::lit(DEFAULT_REGIME_EPS))? {
        Regime::Linear => Ok(evolve_linear(s0, pot.mass, t)),
        Regime::Harmonic(w) => Ok(evolve_harmonic(s0, pot.mass, w, t)),
        Regime::Inverted(w) => evolve_inverted(s0, pot.mass, w, t),
    }
}

/// Time at which the mixed uncertainty vanishes.
///
/// Linear and inverted regimes have exactly one zero, returned with its sign.
/// In the harmonic regime the zeros repeat every `π/(2ω)` and the smallest
/// non-negative one is returned; the constant (coherent-like) orbit yields 0.
pub fn time_of_zero_mixed<T: Scalar>(s0: &UncertaintyState<T>, pot: &PotentialSpec<T>) -> Result<Option<T>> {
    let regime = classify_regime(pot, T::lit(DEFAULT_REGIME_EPS))?;
    if s0.dxp() == T::zero() {
        return Ok(Some(T::zero()));
    }
    let shift = orbit_shift(s0, pot.mass, regime);
    Ok(Some(match regime {
        Regime::Harmonic(w) => {
            let quarter = T::PI() / (T::lit(2.0) * w);
            let t = shift % quarter;
            let t = if t < T::zero() { t + quarter } else { t };
            if t >= quarter {
                T::zero()
            } else {
                t
            }
        }
        _ => shift,
    }))
}

/// Time `T` of the product minimum that anchors the canonical orbit through
/// `s0` (for the harmonic regime: the instant where `Z` is maximal, i.e.
/// `Δx²` minimal).
fn orbit_shift<T: Scalar>(s0: &UncertaintyState<T>, m: T, regime: Regime<T>) -> T {
    let two = T::lit(2.0);
    match regime {
        Regime::Linear => -m * s0.dxp() / s0.dp2(),
        Regime::Harmonic(w) => {
            let z0 = ZkState::harmonic(s0, m, w).z;
            -(two * m * w * s0.dxp()).atan2(z0) / (two * w)
        }
        Regime::Inverted(w) => {
            let z0 = ZkState::inverted(s0, m, w).z;
            (-two * m * w * s0.dxp() / z0).atanh() / (two * w)
        }
    }
}

/// Upper bound on how long a packet with the given initial product can keep
/// narrowing. Finite only for the inverted oscillator; in the linear and
/// harmonic regimes no bound follows from the product alone.
pub fn narrowing_time_bound<T: Scalar>(s0: &UncertaintyState<T>, pot: &PotentialSpec<T>) -> Result<T> {
    match classify_regime(pot, T::lit(DEFAULT_REGIME_EPS))? {
        Regime::Inverted(w) => narrowing_time_bound_from_product(s0.product(), s0.invariant_u(), w),
        r => Err(Error::UnsupportedRegime(r.name())),
    }
}

/// `T_max = artanh(√(1 − U/P)) / (2ω)` for initial product `P ≥ U`.
pub fn narrowing_time_bound_from_product<T: Scalar>(product: T, u: T, omega: T) -> Result<T> {
    if !(u > T::zero() && product >= u && omega > T::zero()) {
        return Err(Error::Range(format!("need 0 < U ≤ P and ω > 0 (U = {u}, P = {product}, ω = {omega})")));
    }
    let x = (T::one() - u / product).max(T::zero()).sqrt();
    Ok(x.atanh() / (T::lit(2.0) * omega))
}

/// An uncertainty history written in terms of its constants of motion and
/// re-centred on the instant `shift` where `Δ_xp = 0` and `Δx²Δp² = U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalOrbit<T> {
    pub regime: Regime<T>,
    pub mass: T,
    pub k: T,
    pub u: T,
    /// Time of the product minimum in the original time coordinate.
    pub shift: T,
}

impl<T: Scalar> CanonicalOrbit<T> {
    pub fn new(regime: Regime<T>, mass: T, k: T, u: T) -> Result<Self> {
        let orbit = Self { regime, mass, k, u, shift: T::zero() };
        orbit.discriminant()?;
        Ok(orbit)
    }

    /// Orbit through `s0` at `t = 0`; `K` in the regime's own normalisation.
    pub fn from_state(s0: &UncertaintyState<T>, pot: &PotentialSpec<T>) -> Result<Self> {
        let regime = classify_regime(pot, T::lit(DEFAULT_REGIME_EPS))?;
        let c = constants_of_motion(s0, pot);
        let k = match regime {
            Regime::Linear => s0.dp2(),
            _ => c.k,
        };
        Ok(Self { regime, mass: pot.mass, k, u: c.u, shift: orbit_shift(s0, pot.mass, regime) })
    }

    /// Gaussian orbit (`U = ħ²/4`) with dimensionless `k = K/(mωħ)`; for the
    /// linear regime `k` is `Δp₀²` itself.
    pub fn gaussian(regime: Regime<T>, mass: T, hbar: T, k: T) -> Result<Self> {
        let kk = match regime {
            Regime::Linear => k,
            Regime::Harmonic(w) | Regime::Inverted(w) => k * mass * w * hbar,
        };
        Self::new(regime, mass, kk, hbar * hbar / T::lit(4.0))
    }

    /// `√(K² ∓ 4m²ω²U)`: amplitude of `Z` (harmonic) or `Z` at the minimum
    /// (inverted); `K` itself for the linear regime.
    pub fn discriminant(&self) -> Result<T> {
        let four = T::lit(4.0);
        if !(self.u > T::zero()) {
            return Err(Error::InvalidOrbit(format!("U must be positive, got {}", self.u)));
        }
        match self.regime {
            Regime::Linear => {
                if self.k > T::zero() {
                    Ok(self.k)
                } else {
                    Err(Error::InvalidOrbit(format!("linear orbit needs K = Δp² > 0, got {}", self.k)))
                }
            }
            Regime::Harmonic(w) => {
                let k2 = self.k * self.k;
                let d2 = k2 - four * (self.mass * w).powi(2) * self.u;
                if d2 >= T::zero() {
                    Ok(d2.sqrt())
                } else if d2 >= -T::lit(64.0) * T::epsilon() * k2 {
                    Ok(T::zero())
                } else {
                    Err(Error::InvalidOrbit(format!("K² − 4m²ω²U = {d2} < 0")))
                }
            }
            Regime::Inverted(w) => Ok((self.k * self.k + four * (self.mass * w).powi(2) * self.u).sqrt()),
        }
    }
}

/// State on `orbit` at `τ` measured from the product minimum.
pub fn canonical_orbit_state<T: Scalar>(orbit: &CanonicalOrbit<T>, tau: T) -> Result<UncertaintyState<T>> {
    let two = T::lit(2.0);
    let d = orbit.discriminant()?;
    let m = orbit.mass;
    let k = orbit.k;
    Ok(match orbit.regime {
        Regime::Linear => {
            let tm = tau / m;
            UncertaintyState::unchecked(k * tm * tm + orbit.u / k, k, k * tm)
        }
        Regime::Harmonic(w) => {
            let mw = m * w;
            let (sin, cos) = (two * w * tau).sin_cos();
            let dxp = d * sin / (two * mw);
            let (k_minus_z, k_plus_z) = split_pair(k, d * cos, variance_product(mw, orbit.u, dxp));
            UncertaintyState::unchecked(k_minus_z / (two * mw * mw), k_plus_z / two, dxp)
        }
        Regime::Inverted(w) => {
            let arg = two * w * tau;
            check_hyperbolic_arg(arg)?;
            let mw = m * w;
            let (_, sinh) = cosh_sinh(arg);
            let z = d + d * cosh_m1(arg);
            let dxp = d * sinh / (two * mw);
            let (z_minus_k, z_plus_k) = split_pair(z, k, variance_product(mw, orbit.u, dxp));
            UncertaintyState::unchecked(z_minus_k / (two * mw * mw), z_plus_k / two, dxp)
        }
    })
}

/// Exact solution of Newton's equations `ẋ = p/m`, `ṗ = −2Ax − B`.
pub fn classical_trajectory<T: Scalar>(q0: &PhasePoint<T>, pot: &PotentialSpec<T>, t: T) -> Result<PhasePoint<T>> {
    let m = pot.mass;
    let two = T::lit(2.0);
    Ok(match classify_regime(pot, T::lit(DEFAULT_REGIME_EPS))? {
        Regime::Linear => PhasePoint {
            x: q0.x + q0.p * t / m - pot.b * t * t / (two * m),
            p: q0.p - pot.b * t,
        },
        Regime::Harmonic(w) => {
            let centre = -pot.b / (two * pot.a);
            let xi = q0.x - centre;
            let (sin, cos) = (w * t).sin_cos();
            PhasePoint {
                x: centre + xi * cos + q0.p / (m * w) * sin,
                p: q0.p * cos - m * w * xi * sin,
            }
        }
        Regime::Inverted(w) => {
            check_hyperbolic_arg(two * w * t)?;
            let centre = -pot.b / (two * pot.a);
            let xi = q0.x - centre;
            let (cosh, sinh) = cosh_sinh(w * t);
            PhasePoint {
                x: centre + xi * cosh + q0.p / (m * w) * sinh,
                p: q0.p * cosh + m * w * xi * sinh,
            }
        }
    })
}
