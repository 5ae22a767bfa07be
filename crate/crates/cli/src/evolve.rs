use std::io::Write;

use qwplab_core::{classical_trajectory, constants_of_motion, evolve, PhasePoint64, PotentialFn, UncertaintyState64};

use crate::config::{Mode, OracleKind, RunConfig};
use crate::csvfmt::{cell, empty_or};
use crate::error::{usage, CliResult};
use crate::oracles::{
    grid_history, grid_history_extrapolated, initial_moments, initial_wavefunction, ode_history, plan_grid, DEFAULT_GRID_DT, DEFAULT_ODE_DT,
};

pub const HEADER: [&str; 9] = ["t", "dx2", "dp2", "dxp", "a", "K", "U", "mean_x", "mean_p"];
pub const DEVIATION_HEADER: [&str; 5] = ["dev_dx2", "dev_dp2", "dev_dxp", "dev_mean_x", "dev_mean_p"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSeriesRow {
    pub t: f64,
    pub state: UncertaintyState64,
    /// Gaussian chirp `Δ_xp/(2ħΔx²)`; `None` when the packet is not Gaussian.
    pub chirp: Option<f64>,
    pub k: f64,
    pub u: f64,
    pub mean: PhasePoint64,
    /// Absolute analytic-vs-oracle differences (compare mode). Mean
    /// deviations are `None` for the ODE oracle, which carries no means.
    pub deviation: Option<[Option<f64>; 5]>,
}

struct Sample {
    state: UncertaintyState64,
    mean: PhasePoint64,
}

fn elapsed(cfg: &RunConfig) -> Vec<f64> {
    cfg.times().into_iter().map(|t| t - cfg.t0).collect()
}

fn analytic_samples(cfg: &RunConfig, s0: &UncertaintyState64, q0: &PhasePoint64) -> CliResult<Vec<Sample>> {
    elapsed(cfg)
        .into_iter()
        .map(|t| {
            Ok(Sample { state: evolve(s0, &cfg.potential, t)?, mean: classical_trajectory(q0, &cfg.potential, t)? })
        })
        .collect()
}

fn ode_samples(cfg: &RunConfig, s0: &UncertaintyState64, q0: &PhasePoint64) -> CliResult<Vec<Sample>> {
    let times = elapsed(cfg);
    let states = ode_history(s0, &cfg.potential, &times, cfg.dt.unwrap_or(DEFAULT_ODE_DT))?;
    times
        .into_iter()
        .zip(states)
        .map(|(t, state)| Ok(Sample { state, mean: classical_trajectory(q0, &cfg.potential, t)? }))
        .collect()
}

fn grid_samples(cfg: &RunConfig, s0: &UncertaintyState64, q0: &PhasePoint64) -> CliResult<Vec<Sample>> {
    if cfg.t1 < cfg.t0 {
        return Err(usage("the grid oracle needs t1 ≥ t0"));
    }
    let grid = plan_grid(&cfg.potential, cfg.hbar, s0, q0, cfg.t1 - cfg.t0, cfg.grid_n)?;
    let psi0 = initial_wavefunction(&cfg.initial, &cfg.mean, &grid, cfg.hbar)?;
    let v = PotentialFn::quadratic(cfg.potential);
    let run = if cfg.richardson { grid_history_extrapolated } else { grid_history };
    let hist = run(&psi0, &v, cfg.potential.mass, cfg.hbar, &elapsed(cfg), cfg.dt.unwrap_or(DEFAULT_GRID_DT))?;
    Ok(hist.into_iter().map(|m| Sample { state: m.state(), mean: m.phase_point() }).collect())
}

fn row(cfg: &RunConfig, t: f64, s: &Sample, gaussian: bool) -> TimeSeriesRow {
    let c = constants_of_motion(&s.state, &cfg.potential);
    TimeSeriesRow {
        t,
        state: s.state,
        chirp: gaussian.then(|| s.state.dxp() / (2.0 * cfg.hbar * s.state.dx2())),
        k: c.k,
        u: c.u,
        mean: s.mean,
        deviation: None,
    }
}

/// Rows of the uncertainty history requested by `cfg`.
pub fn evolve_rows(cfg: &RunConfig) -> CliResult<Vec<TimeSeriesRow>> {
    let (s0, q0, gaussian) = initial_moments(&cfg.initial, &cfg.mean, cfg.hbar)?;
    let times = cfg.times();
    let samples = match cfg.mode {
        Mode::Analytic | Mode::Compare => analytic_samples(cfg, &s0, &q0)?,
        Mode::Ode => ode_samples(cfg, &s0, &q0)?,
        Mode::Grid => grid_samples(cfg, &s0, &q0)?,
    };
    let mut rows: Vec<_> = times.iter().zip(&samples).map(|(&t, s)| row(cfg, t, s, gaussian)).collect();
    if cfg.mode == Mode::Compare {
        let (reference, with_means) = match cfg.oracle {
            OracleKind::Ode => (ode_samples(cfg, &s0, &q0)?, false),
            OracleKind::Grid => (grid_samples(cfg, &s0, &q0)?, true),
        };
        for (r, o) in rows.iter_mut().zip(&reference) {
            let mean = |a: f64, b: f64| with_means.then(|| (a - b).abs());
            r.deviation = Some([
                Some((r.state.dx2() - o.state.dx2()).abs()),
                Some((r.state.dp2() - o.state.dp2()).abs()),
                Some((r.state.dxp() - o.state.dxp()).abs()),
                mean(r.mean.x, o.mean.x),
                mean(r.mean.p, o.mean.p),
            ]);
        }
    }
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[TimeSeriesRow], out: W) -> CliResult<()> {
    let compare = rows.first().is_some_and(|r| r.deviation.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = HEADER.to_vec();
    if compare {
        header.extend(DEVIATION_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            cell(r.t),
            cell(r.state.dx2()),
            cell(r.state.dp2()),
            cell(r.state.dxp()),
            empty_or(r.chirp),
            cell(r.k),
            cell(r.u),
            cell(r.mean.x),
            cell(r.mean.p),
        ];
        if let Some(dev) = r.deviation {
            rec.extend(dev.iter().map(|d| empty_or(*d)));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the history to `cfg.out`, or to standard output if unset or `-`.
pub fn cmd_evolve(cfg: &RunConfig) -> CliResult<()> {
    let rows = evolve_rows(cfg)?;
    crate::csvfmt::with_output(cfg.out.as_deref(), |w| write_rows(&rows, w))
}
