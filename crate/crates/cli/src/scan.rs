//! Parameter scans of narrowing times and chirp extrema.

use std::io::Write;

use clap::ValueEnum;
use qwplab_core::{
    chirp_extrema, classify_regime, narrowing_time_bound, time_of_zero_mixed, CanonicalOrbit, ChirpExtrema,
    PotentialSpec64, Regime, UncertaintyState64, DEFAULT_REGIME_EPS,
};

use crate::config::{resolve_initial, resolve_potential, Initial, RunArgs};
use crate::csvfmt::{cell, empty_or};
use crate::error::{usage, CliResult};
use crate::oracles::{initial_moments, GAUSSIAN_U_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanParam {
    /// Initial Δ_xp at fixed Δx² and U
    #[value(name = "initial_dxp", alias = "initial-dxp")]
    InitialDxp,
    /// Initial product Δx²Δp² at fixed Δx² and U, narrowing (Δ_xp < 0)
    #[value(name = "product")]
    Product,
    /// Dimensionless k of the Gaussian canonical orbit (Δp₀² for the linear regime)
    #[value(name = "k")]
    K,
}

impl ScanParam {
    pub fn name(self) -> &'static str {
        match self {
            ScanParam::InitialDxp => "initial_dxp",
            ScanParam::Product => "product",
            ScanParam::K => "k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub value: f64,
    pub t: Option<f64>,
    pub t_max: Option<f64>,
    pub a_max: Option<f64>,
    pub tau_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub param: ScanParam,
    pub potential: PotentialSpec64,
    pub hbar: f64,
    /// Supplies `Δx²` and `U` for the `initial_dxp` and `product` scans.
    pub base: UncertaintyState64,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

/// Parses a range endpoint; a trailing `U` multiplies by the invariant `u`.
pub fn parse_endpoint(raw: &str, u: f64) -> CliResult<f64> {
    let raw = raw.trim();
    let (num, scale) = match raw.strip_suffix('U') {
        Some(n) => (n.trim(), u),
        None => (raw, 1.0),
    };
    let v: f64 = num.parse().map_err(|_| usage(format!("bad range endpoint {raw:?}")))?;
    if !(v * scale).is_finite() {
        return Err(usage(format!("bad range endpoint {raw:?}")));
    }
    Ok(v * scale)
}

impl ScanSpec {
    pub fn from_args(args: &RunArgs, param: ScanParam, from: &str, to: &str, points: usize) -> CliResult<Self> {
        let potential = resolve_potential(args)?;
        let hbar = args.hbar.unwrap_or(1.0);
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(usage(format!("hbar must be positive, got {hbar}")));
        }
        let initial = match resolve_initial(args, &potential, hbar)? {
            Some(i) => i,
            None => {
                let w = if potential.a == 0.0 { 1.0 } else { (2.0 * potential.a.abs() / potential.mass).sqrt() };
                Initial::Gaussian { alpha: hbar / (potential.mass * w), a: 0.0 }
            }
        };
        let mean = qwplab_core::PhasePoint64::new(0.0, 0.0);
        let (base, _, _) = initial_moments(&initial, &mean, hbar)?;
        let u = base.invariant_u();
        let spec = Self {
            param,
            potential,
            hbar,
            base,
            from: parse_endpoint(from, u)?,
            to: parse_endpoint(to, u)?,
            points,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> CliResult<()> {
        if self.from > self.to {
            return Err(usage(format!("empty range [{}, {}]", self.from, self.to)));
        }
        if self.points == 0 || (self.points == 1 && self.from != self.to) {
            return Err(usage("a non-degenerate range needs at least 2 points"));
        }
        let u = self.base.invariant_u();
        match self.param {
            ScanParam::Product if self.from < u => {
                Err(usage(format!("product range starts below U = {u}")))
            }
            ScanParam::K => match classify_regime(&self.potential, DEFAULT_REGIME_EPS)? {
                Regime::Harmonic(_) if self.from < 1.0 => Err(usage("harmonic k must be ≥ 1")),
                Regime::Linear if self.from <= 0.0 => Err(usage("linear k (Δp₀²) must be positive")),
                _ => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.from == self.to {
            return vec![self.from];
        }
        let n = self.points;
        let h = (self.to - self.from) / (n - 1) as f64;
        (0..n).map(|i| if i == n - 1 { self.to } else { self.from + h * i as f64 }).collect()
    }
}

fn extrema_of(orbit: &CanonicalOrbit<f64>, hbar: f64) -> CliResult<(Option<f64>, Option<f64>)> {
    if (orbit.u - 0.25 * hbar * hbar).abs() > GAUSSIAN_U_TOLERANCE * hbar * hbar {
        return Ok((None, None));
    }
    let k = match orbit.regime {
        Regime::Linear => orbit.k,
        Regime::Harmonic(w) | Regime::Inverted(w) => orbit.k / (orbit.mass * w * hbar),
    };
    // rounding can put the coherent orbit a hair below k = 1
    let k = if matches!(orbit.regime, Regime::Harmonic(_)) { k.max(1.0) } else { k };
    Ok(match chirp_extrema(k, orbit.regime, orbit.mass, hbar)? {
        ChirpExtrema::Extrema { tau_max, a_max, .. } => (Some(a_max), Some(tau_max)),
        ChirpExtrema::Monotone | ChirpExtrema::Constant => (None, None),
    })
}

fn state_row(spec: &ScanSpec, value: f64, s: &UncertaintyState64) -> CliResult<ScanRow> {
    let pot = &spec.potential;
    let t = time_of_zero_mixed(s, pot)?;
    let t_max = match classify_regime(pot, DEFAULT_REGIME_EPS)? {
        Regime::Inverted(_) => Some(narrowing_time_bound(s, pot)?),
        _ => None,
    };
    let (a_max, tau_max) = extrema_of(&CanonicalOrbit::from_state(s, pot)?, spec.hbar)?;
    Ok(ScanRow { value, t, t_max, a_max, tau_max })
}

pub fn scan_rows(spec: &ScanSpec) -> CliResult<Vec<ScanRow>> {
    let dx2 = spec.base.dx2();
    let u = spec.base.invariant_u();
    spec.values()
        .into_iter()
        .map(|v| match spec.param {
            ScanParam::InitialDxp => {
                let s = UncertaintyState64::positive(dx2, (u + v * v) / dx2, v)?;
                state_row(spec, v, &s)
            }
            ScanParam::Product => {
                let s = UncertaintyState64::positive(dx2, v / dx2, -(v - u).max(0.0).sqrt())?;
                state_row(spec, v, &s)
            }
            ScanParam::K => {
                let regime = classify_regime(&spec.potential, DEFAULT_REGIME_EPS)?;
                let orbit = CanonicalOrbit::gaussian(regime, spec.potential.mass, spec.hbar, v)?;
                let (a_max, tau_max) = extrema_of(&orbit, spec.hbar)?;
                Ok(ScanRow { value: v, t: None, t_max: None, a_max, tau_max })
            }
        })
        .collect()
}

pub fn write_scan<W: Write>(param: ScanParam, rows: &[ScanRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([param.name(), "T", "T_max", "a_max", "tau_max"])?;
    for r in rows {
        w.write_record([cell(r.value), empty_or(r.t), empty_or(r.t_max), empty_or(r.a_max), empty_or(r.tau_max)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(args: RunArgs, param: ScanParam, from: &str, to: &str, points: usize) -> CliResult<ScanSpec> {
        ScanSpec::from_args(&args, param, from, to, points)
    }

    #[test]
    fn endpoints() {
        assert_eq!(parse_endpoint("1.1U", 0.25).unwrap(), 0.275);
        assert_eq!(parse_endpoint(" 3 ", 0.25).unwrap(), 3.0);
        assert!(parse_endpoint("abc", 1.0).is_err());
        assert!(parse_endpoint("infU", 1.0).is_err());
    }

    #[test]
    fn inverted_product_scan_is_bounded_and_increasing() {
        let s = spec(RunArgs { inverted: true, ..Default::default() }, ScanParam::Product, "1.1U", "100U", 40).unwrap();
        let rows = scan_rows(&s).unwrap();
        assert_eq!(rows.len(), 40);
        for w in rows.windows(2) {
            assert!(w[1].t_max.unwrap() > w[0].t_max.unwrap());
        }
        for r in &rows {
            assert!(r.t.unwrap() > 0.0 && r.t.unwrap() < r.t_max.unwrap());
        }
    }

    #[test]
    fn harmonic_k_scan_tau_max_decreases() {
        let s = spec(RunArgs { omega: Some(1.0), ..Default::default() }, ScanParam::K, "1.01", "10", 30).unwrap();
        let rows = scan_rows(&s).unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        assert!(rows[0].tau_max.unwrap() < quarter && rows[0].tau_max.unwrap() > 0.8 * quarter);
        for w in rows.windows(2) {
            assert!(w[1].tau_max.unwrap() < w[0].tau_max.unwrap());
        }
        assert!(rows.iter().all(|r| r.t.is_none()));
    }

    #[test]
    fn single_point_and_bad_ranges() {
        let s = spec(RunArgs::default(), ScanParam::InitialDxp, "-1", "-1", 10).unwrap();
        let rows = scan_rows(&s).unwrap();
        assert_eq!(rows.len(), 1);
        // free packet with Δx² = Δp² = ... narrowing ends at T = −mΔ_xp/Δp²
        let dp2 = (0.25 + 1.0) / 0.5;
        assert!((rows[0].t.unwrap() - 1.0 / dp2).abs() < 1e-15);
        assert!(rows[0].t_max.is_none());
        assert!(spec(RunArgs::default(), ScanParam::InitialDxp, "1", "0", 10).is_err());
        assert!(spec(RunArgs::default(), ScanParam::InitialDxp, "0", "1", 1).is_err());
        assert!(spec(RunArgs::default(), ScanParam::Product, "0.5U", "2U", 3).is_err());
        assert!(spec(RunArgs { omega: Some(1.0), ..Default::default() }, ScanParam::K, "0.5", "2", 3).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = [ScanRow { value: 1.0, t: Some(0.5), t_max: None, a_max: Some(0.25), tau_max: Some(1.0) }];
        let mut buf = Vec::new();
        write_scan(ScanParam::Product, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "product,T,T_max,a_max,tau_max\n1.0000000000000000e0,5.0000000000000000e-1,,2.5000000000000000e-1,1.0000000000000000e0\n"
        );
    }
}
