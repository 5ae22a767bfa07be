//! Driving the grid and ODE oracles from a run configuration.

use qwplab_core::oracle::{MomentMeter, MomentOde, MAX_ODE_STEP};
use qwplab_core::{
    classical_trajectory, evolve, measure_moments, moments_from_gaussian, sample_wavefunction, Error,
    GaussianParams64, Grid64, GridWavefunction64, MomentSet64, PhasePoint64, PotentialFn, PotentialSpec64,
    SplitStepPropagator, UncertaintyState64,
};
use qwplab_core::Complex;

use crate::config::Initial;
use crate::error::{usage, CliResult};

pub const DEFAULT_GRID_DT: f64 = 1e-3;
pub const DEFAULT_ODE_DT: f64 = 1e-4;
pub const MIN_GRID_POINTS: usize = 1024;
pub const MAX_GRID_POINTS: usize = 1 << 22;

/// Widths (in standard deviations of |ψ|²) kept inside the domain on each side.
const MARGIN_SIGMAS: f64 = 10.0;
const PLAN_SAMPLES: usize = 200;

/// Tolerance on `U − ħ²/4` (relative to `ħ²`) for treating a moment triple
/// as a Gaussian packet.
pub const GAUSSIAN_U_TOLERANCE: f64 = 1e-9;

fn superposition_parts(alpha: f64, separation: f64, mean: &PhasePoint64) -> CliResult<[GaussianParams64; 2]> {
    let half = 0.5 * separation;
    Ok([
        GaussianParams64::new(alpha, 0.0, mean.x - half, mean.p)?,
        GaussianParams64::new(alpha, 0.0, mean.x + half, mean.p)?,
    ])
}

/// Wavefunction for `initial` on `grid`. Moment triples are accepted only if
/// they describe a Gaussian.
pub fn initial_wavefunction(
    initial: &Initial,
    mean: &PhasePoint64,
    grid: &Grid64,
    hbar: f64,
) -> CliResult<GridWavefunction64> {
    match *initial {
        Initial::Gaussian { alpha, a } => {
            Ok(sample_wavefunction(&GaussianParams64::new(alpha, a, mean.x, mean.p)?, grid, hbar)?)
        }
        Initial::Moments(s) => {
            let g = qwplab_core::gaussian_from_moments(&s, mean, hbar, GAUSSIAN_U_TOLERANCE * hbar * hbar)
                .map_err(|_| usage("a moment triple with U > ħ²/4 has no unique wavefunction; use a superposition preset"))?;
            Ok(sample_wavefunction(&g, grid, hbar)?)
        }
        Initial::Superposition { alpha, separation } => {
            let [l, r] = superposition_parts(alpha, separation, mean)?;
            let one = Complex::new(1.0, 0.0);
            let mut psi = sample_wavefunction(&l, grid, hbar)?.superpose(&sample_wavefunction(&r, grid, hbar)?, one, one)?;
            psi.normalize();
            Ok(psi)
        }
    }
}

/// Initial moment triple and means, and whether the state is a Gaussian.
/// Superpositions are measured on a provisional grid.
pub fn initial_moments(initial: &Initial, mean: &PhasePoint64, hbar: f64) -> CliResult<(UncertaintyState64, PhasePoint64, bool)> {
    match *initial {
        Initial::Moments(s) => {
            let gaussian = (s.invariant_u() - 0.25 * hbar * hbar).abs() <= GAUSSIAN_U_TOLERANCE * hbar * hbar;
            Ok((s, *mean, gaussian))
        }
        Initial::Gaussian { alpha, a } => {
            let (s, q) = moments_from_gaussian(&GaussianParams64::new(alpha, a, mean.x, mean.p)?, hbar);
            Ok((s, q, true))
        }
        Initial::Superposition { alpha, separation } => {
            let half_width = 0.5 * separation.abs() + MARGIN_SIGMAS * alpha.sqrt();
            let k_need = mean.p.abs() / hbar + MARGIN_SIGMAS / alpha.sqrt();
            let n = points_for(2.0 * half_width, k_need)?.max(4096);
            let grid = Grid64::centered(mean.x, half_width, n)?;
            let m = measure_moments(&initial_wavefunction(initial, mean, &grid, hbar)?, hbar)?;
            Ok((m.state(), m.phase_point(), false))
        }
    }
}

fn points_for(length: f64, k_need: f64) -> CliResult<usize> {
    let n = (length * k_need / std::f64::consts::PI).ceil();
    if !(n.is_finite() && n <= MAX_GRID_POINTS as f64) {
        return Err(Error::Range(format!("grid would need {n} points")).into());
    }
    Ok((n as usize).next_power_of_two().max(MIN_GRID_POINTS))
}

/// Grid large enough to hold the packet over `[0, t_end]` elapsed time,
/// sized from the analytic prediction of widths and classical motion.
pub fn plan_grid(
    pot: &PotentialSpec64,
    hbar: f64,
    s0: &UncertaintyState64,
    q0: &PhasePoint64,
    t_end: f64,
    n_override: Option<usize>,
) -> CliResult<Grid64> {
    let (mut x_lo, mut x_hi, mut p_abs) = (q0.x, q0.x, q0.p.abs());
    let (mut dx2, mut dp2) = (s0.dx2(), s0.dp2());
    for j in 1..=PLAN_SAMPLES {
        let t = t_end * j as f64 / PLAN_SAMPLES as f64;
        let s = evolve(s0, pot, t)?;
        let q = classical_trajectory(q0, pot, t)?;
        x_lo = x_lo.min(q.x);
        x_hi = x_hi.max(q.x);
        p_abs = p_abs.max(q.p.abs());
        dx2 = dx2.max(s.dx2());
        dp2 = dp2.max(s.dp2());
    }
    let half_width = 0.5 * (x_hi - x_lo) + MARGIN_SIGMAS * (2.0 * dx2).sqrt();
    let n = match n_override {
        Some(n) => n,
        None => points_for(2.0 * half_width, (p_abs + MARGIN_SIGMAS * (2.0 * dp2).sqrt()) / hbar)?,
    };
    Ok(Grid64::centered(0.5 * (x_lo + x_hi), half_width, n)?)
}

/// Split-step propagation of `psi0` with moments measured at each of the
/// non-decreasing, non-negative `elapsed` times. Each interval is covered by
/// equal steps no longer than `dt`.
pub fn grid_history(
    psi0: &GridWavefunction64,
    potential: &PotentialFn<f64>,
    mass: f64,
    hbar: f64,
    elapsed: &[f64],
    dt: f64,
) -> CliResult<Vec<MomentSet64>> {
    if !(dt > 0.0) {
        return Err(usage(format!("dt must be positive, got {dt}")));
    }
    let mut psi = psi0.clone();
    let mut meter = MomentMeter::new(&psi, hbar);
    let mut prop: Option<SplitStepPropagator<f64>> = None;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(elapsed.len());
    for &target in elapsed {
        let span = target - t;
        if span < 0.0 {
            return Err(usage("grid oracle only propagates forward in time"));
        }
        if span > 0.0 {
            let steps = (span / dt * (1.0 - 1e-12)).ceil().max(1.0);
            let h = span / steps;
            let reuse = prop.as_ref().is_some_and(|p| (p.dt() - h).abs() <= 1e-14 * h);
            if !reuse {
                prop = Some(SplitStepPropagator::new(*psi.grid(), potential, mass, hbar, h)?);
            }
            prop.as_mut().expect("propagator").run(&mut psi, steps as usize, t)?;
        }
        out.push(meter.measure(&psi)?);
        t = target;
    }
    Ok(out)
}

/// [`grid_history`] at `dt` and `dt/2` combined as `(4·m(dt/2) − m(dt))/3`.
/// Strang splitting is symmetric, so its error expands in even powers of
/// `dt` and this cancels the leading `dt²` term.
pub fn grid_history_extrapolated(
    psi0: &GridWavefunction64,
    potential: &PotentialFn<f64>,
    mass: f64,
    hbar: f64,
    elapsed: &[f64],
    dt: f64,
) -> CliResult<Vec<MomentSet64>> {
    let coarse = grid_history(psi0, potential, mass, hbar, elapsed, dt)?;
    let fine = grid_history(psi0, potential, mass, hbar, elapsed, 0.5 * dt)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| f.extrapolate(c)).collect())
}

/// RK4 moment histories at the (arbitrary-signed, monotone) `elapsed` times.
pub fn ode_history(
    s0: &UncertaintyState64,
    pot: &PotentialSpec64,
    elapsed: &[f64],
    dt: f64,
) -> CliResult<Vec<UncertaintyState64>> {
    if !(dt > 0.0 && dt <= MAX_ODE_STEP) {
        return Err(usage(format!("ODE step must lie in (0, {MAX_ODE_STEP}], got {dt}")));
    }
    let ode = MomentOde { a: pot.a, mass: pot.mass };
    let mut s = *s0;
    let mut t = 0.0;
    let mut out = Vec::with_capacity(elapsed.len());
    for &target in elapsed {
        if target != t {
            s = ode.integrate(&s, target - t, dt)?;
            t = target;
        }
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planned_grid_holds_a_spreading_packet() {
        let pot = PotentialSpec64::free(1.0);
        let s0 = UncertaintyState64::unchecked(0.5, 0.5, 0.0);
        let q0 = PhasePoint64::new(0.0, 2.0);
        let grid = plan_grid(&pot, 1.0, &s0, &q0, 5.0, None).unwrap();
        // final width √(0.5 + 0.5·25) ≈ 3.6, centre travels 10
        assert!(grid.x_min() < -40.0 && grid.x_max() > 50.0);
        assert!(grid.k_max() > 2.0 + 12.0);
        assert!(grid.len().is_power_of_two());
    }

    #[test]
    fn grid_history_starts_with_the_initial_state() {
        let grid = Grid64::new(-12.0, 12.0, 1024).unwrap();
        let psi = initial_wavefunction(&Initial::Gaussian { alpha: 1.0, a: 0.0 }, &PhasePoint64::new(0.0, 0.0), &grid, 1.0)
            .unwrap();
        let v = PotentialFn::quadratic(PotentialSpec64::harmonic(1.0, 1.0));
        let hist = grid_history(&psi, &v, 1.0, 1.0, &[0.0, 0.5, 0.5, 1.0], 1e-3).unwrap();
        assert_eq!(hist.len(), 4);
        assert!((hist[0].state().dx2() - 0.5).abs() < 1e-12);
        assert_eq!(hist[1], hist[2]);
        assert!(grid_history(&psi, &v, 1.0, 1.0, &[1.0, 0.5], 1e-3).is_err());
    }

    #[test]
    fn ode_history_runs_both_directions() {
        let s0 = UncertaintyState64::unchecked(1.0, 2.0, -1.0);
        let hist = ode_history(&s0, &PotentialSpec64::free(1.0), &[0.0, -1.0, 0.5], 1e-4).unwrap();
        assert!((hist[1].dx2() - 5.0).abs() < 1e-12);
        assert!((hist[2].dx2() - 0.5).abs() < 1e-12);
        assert!(ode_history(&s0, &PotentialSpec64::free(1.0), &[1.0], 0.1).is_err());
    }

    #[test]
    fn superposition_moments_are_measured() {
        let (s, q, gaussian) =
            initial_moments(&Initial::Superposition { alpha: 1.0, separation: 4.0 }, &PhasePoint64::new(1.0, 0.0), 1.0).unwrap();
        assert!(!gaussian);
        assert!((q.x - 1.0).abs() < 1e-12);
        let ov = (-4.0f64).exp();
        assert!((s.dx2() - (4.5 + 0.5 * ov) / (1.0 + ov)).abs() < 1e-10);
        assert!(s.invariant_u() > 0.25);
    }
}
