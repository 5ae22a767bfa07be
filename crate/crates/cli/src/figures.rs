//! Data files and gnuplot scripts for the three uncertainty/chirp figures.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qwplab_core::{canonical_orbit_state, chirp_extrema, chirp_history, CanonicalOrbit, ChirpExtrema, Regime};

use crate::csvfmt::cell;
use crate::error::{CliError, CliResult};

pub const FIGURE_SAMPLES: usize = 801;

/// Linear regime: `Δp₀²` of the plotted packet.
pub const FIG1_K: f64 = 0.5;
pub const FIG1_SPAN: f64 = 4.0;
pub const FIG2_KS: [f64; 3] = [1.2, 1.5, 2.5];
pub const FIG2_UNCERTAINTY_K: f64 = 1.2;
pub const FIG3_KS: [f64; 3] = [-1.0, 0.0, 0.8];
pub const FIG3_UNCERTAINTY_K: f64 = 1.0;
pub const FIG3_SPAN: f64 = 5.0;

/// Units of the figures: `m = ω = ħ = 1`.
const M: f64 = 1.0;
const W: f64 = 1.0;
const HBAR: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub name: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|&v| cell(v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn taus(lo: f64, hi: f64) -> Vec<f64> {
    let n = FIGURE_SAMPLES;
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn k_label(k: f64) -> String {
    format!("a_k{k}")
}

/// Position uncertainty and chirp of a Gaussian in an at most linear potential.
pub fn figure1() -> CliResult<FigureTable> {
    let orbit = CanonicalOrbit::gaussian(Regime::Linear, M, HBAR, FIG1_K)?;
    let rows = taus(-FIG1_SPAN, FIG1_SPAN)
        .into_iter()
        .map(|tau| {
            let s = canonical_orbit_state(&orbit, tau)?;
            Ok(vec![tau, s.dx2(), chirp_history(FIG1_K, Regime::Linear, M, HBAR, tau)?])
        })
        .collect::<CliResult<_>>()?;
    Ok(FigureTable { name: "fig1", header: vec!["tau".into(), "dx2".into(), "a".into()], rows })
}

/// Chirp curves for several `k` plus the scaled uncertainties of one orbit,
/// all in the scaled variables `ã = 2ħa/(mω)`, `(ΔX)² = 2mωΔx²/ħ`,
/// `(ΔP)² = 2Δp²/(mωħ)`, `Δ_XP = 2Δ_xp/ħ`.
fn oscillator_figure(
    name: &'static str,
    regime: Regime<f64>,
    ks: &[f64],
    uncertainty_k: f64,
    lo: f64,
    hi: f64,
) -> CliResult<FigureTable> {
    let orbit = CanonicalOrbit::gaussian(regime, M, HBAR, uncertainty_k)?;
    let mut header = vec!["tau".to_string()];
    header.extend(ks.iter().map(|&k| k_label(k)));
    header.extend(["X2", "P2", "XP"].map(String::from));
    let rows = taus(lo, hi)
        .into_iter()
        .map(|tau| {
            let mut row = vec![tau];
            for &k in ks {
                row.push(chirp_history(k, regime, M, HBAR, tau)? * 2.0 * HBAR / (M * W));
            }
            let s = canonical_orbit_state(&orbit, tau)?;
            row.push(s.dx2() * 2.0 * M * W / HBAR);
            row.push(s.dp2() * 2.0 / (M * W * HBAR));
            row.push(s.dxp() * 2.0 / HBAR);
            Ok(row)
        })
        .collect::<CliResult<_>>()?;
    Ok(FigureTable { name, header, rows })
}

/// Harmonic oscillator over one period of the uncertainties, centred on
/// the product minimum.
pub fn figure2() -> CliResult<FigureTable> {
    let half = PI / (2.0 * W);
    oscillator_figure("fig2", Regime::Harmonic(W), &FIG2_KS, FIG2_UNCERTAINTY_K, -half, half)
}

/// Inverted oscillator.
pub fn figure3() -> CliResult<FigureTable> {
    oscillator_figure("fig3", Regime::Inverted(W), &FIG3_KS, FIG3_UNCERTAINTY_K, -FIG3_SPAN / W, FIG3_SPAN / W)
}

fn fig1_script() -> CliResult<String> {
    let (tau_max, tau_min) = match chirp_extrema(FIG1_K, Regime::Linear, M, HBAR)? {
        ChirpExtrema::Extrema { tau_max, tau_min, .. } => (tau_max, tau_min),
        _ => unreachable!("linear Gaussian orbits always have chirp extrema"),
    };
    let dx2_min = HBAR * HBAR / (4.0 * FIG1_K);
    Ok(format!(
        "set datafile separator ','
set key top left
set xlabel 'tau'
set ylabel 'a, (Delta x)^2'
set xzeroaxis
set arrow from {tau_max},graph 0 to {tau_max},graph 1 nohead dashtype 3
set arrow from {tau_min},graph 0 to {tau_min},graph 1 nohead dashtype 3
set label 'tau_max' at {tau_max},graph 0.95 center
set label 'tau_min' at {tau_min},graph 0.95 center
set arrow from graph 0,first {dx2_min} to graph 1,first {dx2_min} nohead dashtype 3
set arrow from graph 0,first {twice} to graph 1,first {twice} nohead dashtype 3
set label '(Delta x)^2_min' at graph 0.02,first {dx2_min} offset 0,0.6
set label '2 (Delta x)^2_min' at graph 0.02,first {twice} offset 0,0.6
plot 'fig1.csv' using 1:3 with lines title 'a', \\
     '' using 1:2 with lines dashtype 2 title '(Delta x)^2'
",
        twice = 2.0 * dx2_min
    ))
}

fn oscillator_script(table: &FigureTable, chirp_title: &str, k_unc: f64) -> String {
    let file = format!("{}.csv", table.name);
    let chirps: Vec<String> = table
        .header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("a_k"))
        .map(|(j, h)| format!("'{file}' using 1:{} with lines title 'k = {}'", j + 1, &h[3..]))
        .collect();
    let col = |name: &str| table.header.iter().position(|h| h == name).expect("column") + 1;
    format!(
        "set datafile separator ','
set xlabel 'tau'
set multiplot layout 1,2
set title '{chirp_title}'
set ylabel 'a~'
set xzeroaxis
plot {}
set title 'k = {k_unc}'
set ylabel '(Delta X)^2, (Delta P)^2, Delta_XP'
plot '{file}' using 1:{} with lines title '(Delta X)^2', \\
     '' using 1:{} with lines title '(Delta P)^2', \\
     '' using 1:{} with lines title 'Delta_XP'
unset multiplot
",
        chirps.join(", \\\n     "),
        col("X2"),
        col("P2"),
        col("XP"),
    )
}

/// Writes `fig{1,2,3}.csv` and matching `.gp` scripts into `dir`, creating
/// it if needed. Returns the written paths.
pub fn cmd_figures(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let io = |p: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let f1 = figure1()?;
    let f2 = figure2()?;
    let f3 = figure3()?;
    let scripts = [
        fig1_script()?,
        oscillator_script(&f2, "harmonic oscillator", FIG2_UNCERTAINTY_K),
        oscillator_script(&f3, "inverted oscillator", FIG3_UNCERTAINTY_K),
    ];
    let mut written = Vec::new();
    for (table, script) in [f1, f2, f3].iter().zip(scripts) {
        let csv_path = dir.join(format!("{}.csv", table.name));
        let mut buf = Vec::new();
        table.write_csv(&mut buf)?;
        fs::write(&csv_path, buf).map_err(|e| io(&csv_path, e))?;
        let gp_path = dir.join(format!("{}.gp", table.name));
        fs::write(&gp_path, script).map_err(|e| io(&gp_path, e))?;
        written.push(csv_path);
        written.push(gp_path);
    }
    Ok(written)
}
