//! Seeded verification suites: invariants of the closed-form evolution and
//! agreement with the numerical oracles.

use std::io::Write;

use clap::ValueEnum;
use qwplab_core::{
    classical_trajectory, constants_of_motion, evolve, evolve_gaussian, gaussian_from_moments, moments_from_gaussian,
    sample_wavefunction, verify_general_first_derivative, GaussianParams64, Grid64, PotentialFn, PotentialSpec64,
    UncertaintyState64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cases::{
    random_gaussian, random_potential, random_state, random_time, typical_state, RegimeKind, ALL_REGIMES,
};
use crate::error::CliResult;
use crate::oracles::{grid_history_extrapolated, ode_history, plan_grid, DEFAULT_GRID_DT, DEFAULT_ODE_DT};

pub const ANALYTIC_CONSERVATION_TOL: f64 = 1e-10;
pub const ODE_CONSERVATION_TOL: f64 = 1e-9;
pub const ODE_AGREEMENT_TOL: f64 = 1e-8;
pub const GRID_AGREEMENT_TOL: f64 = 1e-6;
pub const ROUNDTRIP_TOL: f64 = 1e-12;
pub const FIRST_DERIVATIVE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Conservation,
    OracleGrid,
    OracleOde,
    GaussianRoundtrip,
    GeneralPotential,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_deviation, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Running maximum that turns NaN into a failure.
#[derive(Default)]
struct Worst(f64);

impl Worst {
    fn add(&mut self, v: f64) {
        self.0 = if v.is_nan() { f64::INFINITY } else { self.0.max(v) };
    }
}

/// `|K(t) − K(0)|` relative to `Δp² + |2mA|Δx²` at `t = 0`, and
/// `|U(t) − U(0)|/U(0)`.
pub fn conservation_deviation(s0: &UncertaintyState64, s: &UncertaintyState64, pot: &PotentialSpec64) -> (f64, f64) {
    let c0 = constants_of_motion(s0, pot);
    let c = constants_of_motion(s, pot);
    let k_scale = s0.dp2() + (2.0 * pot.mass * pot.a).abs() * s0.dx2();
    ((c.k - c0.k).abs() / k_scale, (c.u - c0.u).abs() / c0.u)
}

/// Maximum relative component deviation, each component scaled by
/// `max(1, |reference|)`.
pub fn scaled_deviation(reference: &UncertaintyState64, other: &UncertaintyState64) -> f64 {
    [
        (reference.dx2(), other.dx2()),
        (reference.dp2(), other.dp2()),
        (reference.dxp(), other.dxp()),
    ]
    .iter()
    .map(|&(r, o)| (r - o).abs() / r.abs().max(1.0))
    .fold(0.0, f64::max)
}

fn conservation(rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for kind in ALL_REGIMES {
        let (mut k_dev, mut u_dev) = (Worst::default(), Worst::default());
        for _ in 0..1000 {
            let pot = random_potential(rng, kind);
            let s0 = typical_state(rng, 1.0);
            let t = random_time(rng, &pot, 10.0);
            let (dk, du) = conservation_deviation(&s0, &evolve(&s0, &pot, t)?, &pot);
            k_dev.add(dk);
            u_dev.add(du);
        }
        checks.push(Check::new(format!("conservation/analytic/{}/K", kind.name()), k_dev.0, ANALYTIC_CONSERVATION_TOL));
        checks.push(Check::new(format!("conservation/analytic/{}/U", kind.name()), u_dev.0, ANALYTIC_CONSERVATION_TOL));

        let (mut k_dev, mut u_dev) = (Worst::default(), Worst::default());
        for _ in 0..10 {
            let pot = random_potential(rng, kind);
            let s0 = typical_state(rng, 1.0);
            let t = random_time(rng, &pot, 10.0);
            let s = ode_history(&s0, &pot, &[t], DEFAULT_ODE_DT)?[0];
            let (dk, du) = conservation_deviation(&s0, &s, &pot);
            k_dev.add(dk);
            u_dev.add(du);
        }
        checks.push(Check::new(format!("conservation/rk4/{}/K", kind.name()), k_dev.0, ODE_CONSERVATION_TOL));
        checks.push(Check::new(format!("conservation/rk4/{}/U", kind.name()), u_dev.0, ODE_CONSERVATION_TOL));
    }
    Ok(checks)
}

/// Analytic vs RK4 for `cases` random states per regime (inverted `t ≤ 2`).
pub fn ode_agreement(rng: &mut ChaCha8Rng, kind: RegimeKind, cases: usize) -> CliResult<f64> {
    let mut worst = Worst::default();
    for _ in 0..cases {
        let pot = random_potential(rng, kind);
        let s0 = random_state(rng, 1.0);
        let t_end = if kind == RegimeKind::Inverted { 2.0 } else { 5.0 };
        let times: Vec<f64> = (1..=4).map(|i| t_end * i as f64 / 4.0).collect();
        for (t, s) in times.iter().zip(ode_history(&s0, &pot, &times, DEFAULT_ODE_DT)?) {
            worst.add(scaled_deviation(&evolve(&s0, &pot, *t)?, &s));
        }
    }
    Ok(worst.0)
}

/// Analytic vs split-step (Richardson-extrapolated) for one Gaussian: largest
/// absolute deviation of the moment triple and of the means at `times`.
pub fn grid_agreement(
    g: &GaussianParams64,
    pot: &PotentialSpec64,
    hbar: f64,
    times: &[f64],
) -> CliResult<(f64, f64)> {
    let (s0, q0) = moments_from_gaussian(g, hbar);
    let t_end = times.iter().copied().fold(0.0, f64::max);
    let grid = plan_grid(pot, hbar, &s0, &q0, t_end, None)?;
    let psi = sample_wavefunction(g, &grid, hbar)?;
    let hist = grid_history_extrapolated(&psi, &PotentialFn::quadratic(*pot), pot.mass, hbar, times, DEFAULT_GRID_DT)?;
    let (mut moments, mut means) = (Worst::default(), Worst::default());
    for (&t, m) in times.iter().zip(&hist) {
        moments.add(evolve(&s0, pot, t)?.max_abs_diff(&m.state()));
        let q = classical_trajectory(&q0, pot, t)?;
        means.add((q.x - m.mean_x).abs().max((q.p - m.mean_p).abs()));
    }
    Ok((moments.0, means.0))
}

fn oracle_grid(rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for kind in ALL_REGIMES {
        let (mut moments, mut means) = (Worst::default(), Worst::default());
        for _ in 0..3 {
            let pot = random_potential(rng, kind);
            let g = random_gaussian(rng);
            let (dm, dq) = grid_agreement(&g, &pot, 1.0, &[0.5, 1.0, 1.5, 2.0])?;
            moments.add(dm);
            means.add(dq);
        }
        checks.push(Check::new(format!("oracle-grid/{}/moments", kind.name()), moments.0, GRID_AGREEMENT_TOL));
        checks.push(Check::new(format!("oracle-grid/{}/means", kind.name()), means.0, GRID_AGREEMENT_TOL));
    }
    Ok(checks)
}

fn oracle_ode(rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    ALL_REGIMES
        .iter()
        .map(|&kind| Ok(Check::new(format!("oracle-ode/{}", kind.name()), ode_agreement(rng, kind, 20)?, ODE_AGREEMENT_TOL)))
        .collect()
}

fn gaussian_roundtrip(rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let mut round = Worst::default();
    let mut closure = Worst::default();
    for _ in 0..500 {
        let hbar = rng.gen_range(0.5..2.0);
        let g = GaussianParams64::new(10f64.powf(rng.gen_range(-2.0..2.0)), rng.gen_range(-3.0..3.0), 0.0, 0.0)?;
        let (s, q) = moments_from_gaussian(&g, hbar);
        let back = gaussian_from_moments(&s, &q, hbar, 1e-9 * hbar * hbar)?;
        round.add(((back.alpha - g.alpha) / g.alpha).abs().max((back.a - g.a).abs() / g.a.abs().max(1.0)));

        let kind = [RegimeKind::Linear, RegimeKind::Harmonic, RegimeKind::Inverted][rng.gen_range(0..3)];
        let pot = random_potential(rng, kind);
        let t = random_time(rng, &pot, 5.0);
        let evolved = evolve_gaussian(&g, &pot, hbar, t)?;
        let (s, _) = moments_from_gaussian(&evolved, hbar);
        // U is a difference of two terms of size Δx²Δp²; compare at that scale
        closure.add((s.invariant_u() - 0.25 * hbar * hbar).abs() / s.product());
    }
    Ok(vec![
        Check::new("gaussian-roundtrip/params", round.0, ROUNDTRIP_TOL),
        Check::new("gaussian-roundtrip/evolved-U", closure.0, ROUNDTRIP_TOL),
    ])
}

fn general_potential(rng: &mut ChaCha8Rng) -> CliResult<Vec<Check>> {
    let grid = Grid64::new(-10.0, 10.0, 2048)?;
    let potentials: [(&str, PotentialFn<f64>); 2] =
        [("quartic", PotentialFn::quartic(1.0)), ("double-well", PotentialFn::from_fn(|x| x * x * x * x - 2.0 * x * x))];
    potentials
        .iter()
        .map(|(name, v)| {
            let g = GaussianParams64::new(1.0, rng.gen_range(-0.3..0.3), rng.gen_range(-0.5..0.5), 0.0)?;
            let psi = sample_wavefunction(&g, &grid, 1.0)?;
            let check = verify_general_first_derivative(&psi, v, 1.0, 1.0, 1e-4, 2000)?;
            Ok(Check::new(format!("general-potential/{name}"), check.max_deviation, FIRST_DERIVATIVE_TOL))
        })
        .collect()
}

/// Runs `suite` with a ChaCha generator seeded by `seed`; the same seed
/// always produces the same checks and numbers.
pub fn run_suite(suite: Suite, seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Conservation => conservation(&mut rng),
        Suite::OracleGrid => oracle_grid(&mut rng),
        Suite::OracleOde => oracle_ode(&mut rng),
        Suite::GaussianRoundtrip => gaussian_roundtrip(&mut rng),
        Suite::GeneralPotential => general_potential(&mut rng),
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Conservation, Suite::OracleOde, Suite::OracleGrid, Suite::GaussianRoundtrip, Suite::GeneralPotential] {
                all.extend(run_suite(s, seed)?);
            }
            Ok(all)
        }
    }
}

pub fn write_report<W: Write>(checks: &[Check], mut out: W) -> std::io::Result<()> {
    for c in checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} {:<40} max_dev={:.3e} tol={:.0e}", c.name, c.max_deviation, c.tolerance)?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{} checks, {} failed", checks.len(), failed)
}
