//! Seeded random test cases shared by `verify` and the acceptance suite.

use qwplab_core::{GaussianParams64, PotentialSpec64, UncertaintyState64};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    Linear,
    Harmonic,
    Inverted,
}

pub const ALL_REGIMES: [RegimeKind; 3] = [RegimeKind::Linear, RegimeKind::Harmonic, RegimeKind::Inverted];

impl RegimeKind {
    pub fn name(self) -> &'static str {
        match self {
            RegimeKind::Linear => "linear",
            RegimeKind::Harmonic => "harmonic",
            RegimeKind::Inverted => "inverted",
        }
    }
}

/// Random potential of the given kind, `m ∈ [0.5, 2)`, `ω ∈ [0.2, 1.5)`,
/// with a linear term `B ∈ [−0.5, 0.5)`.
pub fn random_potential<R: Rng>(rng: &mut R, kind: RegimeKind) -> PotentialSpec64 {
    let m = rng.gen_range(0.5..2.0);
    let w: f64 = rng.gen_range(0.2..1.5);
    let a = match kind {
        RegimeKind::Linear => 0.0,
        RegimeKind::Harmonic => 0.5 * m * w * w,
        RegimeKind::Inverted => -0.5 * m * w * w,
    };
    PotentialSpec64 { a, b: rng.gen_range(-0.5..0.5), c: 0.0, mass: m }
}

/// Random physical state for `ħ`: `Δx²` log-uniform over three decades,
/// `U ∈ [ħ²/4, 10ħ²/4)`, product up to `100·U`, either sign of `Δ_xp`.
pub fn random_state<R: Rng>(rng: &mut R, hbar: f64) -> UncertaintyState64 {
    let dx2 = 10f64.powf(rng.gen_range(-1.5..1.5));
    let u = 0.25 * hbar * hbar * rng.gen_range(1.0..10.0);
    let product = u * 10f64.powf(rng.gen_range(0.0..2.0));
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    UncertaintyState64::unchecked(dx2, product / dx2, sign * (product - u).sqrt())
}

/// Random state of order one: `Δx² ∈ [0.5, 2)`, `U ∈ [ħ²/4, ħ²)`, product
/// up to `4U`. Conservation checks use these because `U` computed from an
/// evolved state carries an absolute error of order `ε·Δx²Δp²`.
pub fn typical_state<R: Rng>(rng: &mut R, hbar: f64) -> UncertaintyState64 {
    let dx2 = 2f64.powf(rng.gen_range(-1.0..1.0));
    let u = 0.25 * hbar * hbar * rng.gen_range(1.0..4.0);
    let product = u * rng.gen_range(1.0..4.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    UncertaintyState64::unchecked(dx2, product / dx2, sign * (product - u).sqrt())
}

/// Random Gaussian packet suitable for grid propagation.
pub fn random_gaussian<R: Rng>(rng: &mut R) -> GaussianParams64 {
    GaussianParams64::new(
        10f64.powf(rng.gen_range(-0.3..0.3)),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
    .expect("positive width")
}

/// Random evolution time in `[0, t_max)`; for the inverted oscillator also
/// `2ω|t| ≤ 4`. Past that, `Δx²Δp²` outgrows `U` by more than 1e5 and the
/// rounding of the stored moments alone exceeds 1e-10 of `U`.
pub fn random_time<R: Rng>(rng: &mut R, pot: &PotentialSpec64, t_max: f64) -> f64 {
    let limit = if pot.a < 0.0 {
        let w = (-2.0 * pot.a / pot.mass).sqrt();
        t_max.min(2.0 / w)
    } else {
        t_max
    };
    rng.gen_range(0.0..limit)
}
