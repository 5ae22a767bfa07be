use super::grid::{Grid, GridWavefunction};
use super::moments::MomentMeter;
use super::potential::PotentialFn;
use super::split_step::{propagate, SplitStepPropagator};
use crate::analytic::evolve;
use crate::error::{Error, Result};
use crate::gaussian::{moments_from_gaussian, sample_wavefunction, GaussianParams};
use crate::scalar::Scalar;
use crate::uncertainty::PotentialSpec;

/// Histories recorded by [`verify_general_first_derivative`].
#[derive(Debug, Clone, PartialEq)]
pub struct FirstDerivativeCheck<T> {
    /// `max_t |d(Δx²)/dt − 2Δ_xp/m|` over interior samples.
    pub max_deviation: T,
    pub times: Vec<T>,
    pub dx2: Vec<T>,
    pub dxp: Vec<T>,
}

/// Propagates `psi0` in an arbitrary potential and compares a central
/// difference of `Δx²` with `2Δ_xp/m` at every step.
pub fn verify_general_first_derivative<T: Scalar>(
    psi0: &GridWavefunction<T>,
    potential: &PotentialFn<T>,
    mass: T,
    hbar: T,
    dt: T,
    steps: usize,
) -> Result<FirstDerivativeCheck<T>> {
    if steps < 2 {
        return Err(Error::Range("need at least two steps for a central difference".into()));
    }
    // validates dt and normalization
    let mut psi = propagate(psi0, potential, mass, hbar, dt, 0)?;
    let mut prop = SplitStepPropagator::new(*psi.grid(), potential, mass, hbar, dt)?;
    let mut meter = MomentMeter::new(&psi, hbar);

    let mut times = Vec::with_capacity(steps + 1);
    let mut dx2 = Vec::with_capacity(steps + 1);
    let mut dxp = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        if i > 0 {
            prop.run(&mut psi, 1, T::lit((i - 1) as f64) * dt)?;
        }
        let s = meter.measure(&psi)?.state();
        times.push(T::lit(i as f64) * dt);
        dx2.push(s.dx2());
        dxp.push(s.dxp());
    }
    let two = T::lit(2.0);
    let max_deviation = (1..steps)
        .map(|i| ((dx2[i + 1] - dx2[i - 1]) / (two * dt) - two * dxp[i] / mass).abs())
        .fold(T::zero(), T::max);
    Ok(FirstDerivativeCheck { max_deviation, times, dx2, dxp })
}

/// A Gaussian in a quadratic potential, the reference for grid convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceProblem<T> {
    pub packet: GaussianParams<T>,
    pub potential: PotentialSpec<T>,
    pub hbar: T,
    pub t_end: T,
    /// Domain is `[x0 − half_width, x0 + half_width)`.
    pub half_width: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub dt: T,
    pub n: usize,
    /// Largest absolute deviation of `(Δx², Δp², Δ_xp)` at `t_end`.
    pub error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    /// Sweep over `dt` at the largest `n`.
    pub time_rows: Vec<ConvergenceRow<T>>,
    /// Sweep over `n` at the smallest `dt`.
    pub space_rows: Vec<ConvergenceRow<T>>,
}

impl<T: Scalar> ConvergenceReport<T> {
    /// `error(dt_i) / error(dt_{i+1})` for consecutive rows of the time sweep.
    pub fn time_error_ratios(&self) -> Vec<T> {
        self.time_rows.windows(2).map(|w| w[0].error / w[1].error).collect()
    }
}

pub fn convergence_report<T: Scalar>(
    problem: &ConvergenceProblem<T>,
    dts: &[T],
    ns: &[usize],
) -> Result<ConvergenceReport<T>> {
    let n_max = *ns.iter().max().ok_or_else(|| Error::Range("empty n list".into()))?;
    let dt_min = dts
        .iter()
        .copied()
        .fold(None, |m: Option<T>, d| Some(m.map_or(d, |m| m.min(d))))
        .ok_or_else(|| Error::Range("empty dt list".into()))?;
    let (s0, _) = moments_from_gaussian(&problem.packet, problem.hbar);
    let exact = evolve(&s0, &problem.potential, problem.t_end)?;
    let potential = PotentialFn::quadratic(problem.potential);

    let run = |dt: T, n: usize| -> Result<ConvergenceRow<T>> {
        let grid = Grid::centered(problem.packet.x0, problem.half_width, n)?;
        let psi0 = sample_wavefunction(&problem.packet, &grid, problem.hbar)?;
        let steps = (problem.t_end / dt).round().to_f64_lossy() as usize;
        let dt_exact = problem.t_end / T::lit(steps.max(1) as f64);
        let psi = propagate(&psi0, &potential, problem.potential.mass, problem.hbar, dt_exact, steps)?;
        let measured = MomentMeter::new(&psi, problem.hbar).measure(&psi)?.state();
        Ok(ConvergenceRow { dt, n, error: measured.max_abs_diff(&exact) })
    };

    let time_rows = dts.iter().map(|&dt| run(dt, n_max)).collect::<Result<Vec<_>>>()?;
    let space_rows = ns.iter().map(|&n| run(dt_min, n)).collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport { time_rows, space_rows })
}
