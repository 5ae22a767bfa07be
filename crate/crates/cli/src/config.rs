//! Run configuration: command-line flags merged over an optional
//! `key = value` defaults file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use qwplab_core::{CanonicalOrbit, PhasePoint64, PotentialSpec64, Regime, UncertaintyState64};

use crate::error::{usage, CliResult};

pub const DEFAULTS_ENV: &str = "QWPLAB_DEFAULTS";

const DEFAULT_SAMPLES: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Linear,
    Harmonic,
    Inverted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    Analytic,
    Ode,
    Grid,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OracleKind {
    Ode,
    #[default]
    Grid,
}

/// Flags shared by `evolve` and `scan`. Every field is optional so that a
/// defaults file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Quadratic coefficient of V(x) = A x² + B x (overrides --omega)
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Use the inverted oscillator A = −mω²/2
    #[arg(long)]
    pub inverted: bool,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long, value_name = "DX2,DP2,DXP")]
    pub init_moments: Option<String>,
    #[arg(long, value_name = "ALPHA,A")]
    pub init_gaussian: Option<String>,
    /// coherent | squeezed:<alpha> | superposition:<sep> | k:<k>
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Oracle compared against in `--mode compare`
    #[arg(long, value_enum)]
    pub oracle: Option<OracleKind>,
    /// Time step of the ODE or grid oracle
    #[arg(long)]
    pub dt: Option<f64>,
    /// Combine grid runs at dt and dt/2 to cancel the O(dt²) splitting error
    #[arg(long)]
    pub richardson: bool,
    /// Number of grid points (power of two); sized automatically if absent
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults file; falls back to $QWPLAB_DEFAULTS
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KNOWN_KEYS: &[&str] = &[
    "regime", "A", "omega", "inverted", "B", "mass", "hbar", "init-moments", "init-gaussian", "preset", "x0", "p0",
    "t0", "t1", "samples", "mode", "oracle", "dt", "richardson", "grid-n", "out", "seed",
];

/// Reads a defaults file of `key = value` lines. `#` starts a comment,
/// `[section]` headers are ignored, values may be quoted and keys may use
/// `_` in place of `-`.
pub fn read_defaults(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| crate::error::CliError::Io(format!("{}: {e}", path.display())))?;
    parse_defaults(&text)
}

pub fn parse_defaults(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("defaults line {}: expected key = value", no + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(usage(format!("defaults line {}: unknown key {key:?}", no + 1)));
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .or_else(|| value.strip_prefix('\'').and_then(|v| v.strip_suffix('\'')))
            .unwrap_or(value);
        map.insert(key, value.to_string());
    }
    Ok(map)
}

/// Defaults from `--config`, else from `$QWPLAB_DEFAULTS`, else empty.
pub fn load_defaults(explicit: Option<&Path>) -> CliResult<BTreeMap<String, String>> {
    match explicit {
        Some(p) => read_defaults(p),
        None => match std::env::var_os(DEFAULTS_ENV) {
            Some(p) if !p.is_empty() => read_defaults(Path::new(&p)),
            _ => Ok(BTreeMap::new()),
        },
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> CliResult<T> {
    raw.trim().parse().map_err(|_| usage(format!("cannot parse {key} = {raw:?}")))
}

fn parse_enum<T: ValueEnum>(key: &str, raw: &str) -> CliResult<T> {
    T::from_str(raw.trim(), true).map_err(|_| usage(format!("invalid {key} = {raw:?}")))
}

fn fill<T: FromStr>(slot: &mut Option<T>, map: &BTreeMap<String, String>, key: &str) -> CliResult<()> {
    if slot.is_none() {
        if let Some(raw) = map.get(key) {
            *slot = Some(parse_value(key, raw)?);
        }
    }
    Ok(())
}

impl RunArgs {
    /// Fills unset flags from `map`. The initial condition is taken from the
    /// file only if no initial-condition flag was given.
    pub fn merge_defaults(&mut self, map: &BTreeMap<String, String>) -> CliResult<()> {
        if self.regime.is_none() {
            if let Some(raw) = map.get("regime") {
                self.regime = Some(parse_enum("regime", raw)?);
            }
        }
        if self.mode.is_none() {
            if let Some(raw) = map.get("mode") {
                self.mode = Some(parse_enum("mode", raw)?);
            }
        }
        if self.oracle.is_none() {
            if let Some(raw) = map.get("oracle") {
                self.oracle = Some(parse_enum("oracle", raw)?);
            }
        }
        if !self.inverted {
            if let Some(raw) = map.get("inverted") {
                self.inverted = parse_value("inverted", raw)?;
            }
        }
        if !self.richardson {
            if let Some(raw) = map.get("richardson") {
                self.richardson = parse_value("richardson", raw)?;
            }
        }
        fill(&mut self.a, map, "A")?;
        fill(&mut self.omega, map, "omega")?;
        fill(&mut self.b, map, "B")?;
        fill(&mut self.mass, map, "mass")?;
        fill(&mut self.hbar, map, "hbar")?;
        if self.init_moments.is_none() && self.init_gaussian.is_none() && self.preset.is_none() {
            fill(&mut self.init_moments, map, "init-moments")?;
            fill(&mut self.init_gaussian, map, "init-gaussian")?;
            fill(&mut self.preset, map, "preset")?;
        }
        fill(&mut self.x0, map, "x0")?;
        fill(&mut self.p0, map, "p0")?;
        fill(&mut self.t0, map, "t0")?;
        fill(&mut self.t1, map, "t1")?;
        fill(&mut self.samples, map, "samples")?;
        fill(&mut self.dt, map, "dt")?;
        fill(&mut self.grid_n, map, "grid-n")?;
        fill(&mut self.out, map, "out")?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Moments(UncertaintyState64),
    Gaussian { alpha: f64, a: f64 },
    /// Equal-weight sum of two real Gaussians of width `alpha` centred at
    /// `x0 ± separation/2`.
    Superposition { alpha: f64, separation: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub potential: PotentialSpec64,
    pub hbar: f64,
    pub initial: Initial,
    /// Mean position and momentum at `t0`.
    pub mean: PhasePoint64,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub mode: Mode,
    pub oracle: OracleKind,
    pub dt: Option<f64>,
    pub richardson: bool,
    pub grid_n: Option<usize>,
    pub out: Option<PathBuf>,
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("{name} must be finite, got {v}")))
    }
}

fn parse_list(name: &str, raw: &str, len: usize) -> CliResult<Vec<f64>> {
    let values = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("{name}: cannot parse {s:?}"))))
        .collect::<CliResult<Vec<_>>>()?;
    if values.len() != len {
        return Err(usage(format!("{name} expects {len} comma-separated numbers, got {raw:?}")));
    }
    for &v in &values {
        finite(name, v)?;
    }
    Ok(values)
}

/// Potential from `--A`, or from `--regime`/`--omega`/`--inverted`.
pub fn resolve_potential(args: &RunArgs) -> CliResult<PotentialSpec64> {
    let mass = positive("mass", args.mass.unwrap_or(1.0))?;
    let b = finite("B", args.b.unwrap_or(0.0))?;
    let a = if let Some(a) = args.a {
        let a = finite("A", a)?;
        if args.omega.is_some() || args.inverted {
            return Err(usage("--A cannot be combined with --omega or --inverted"));
        }
        let implied = if a > 0.0 {
            RegimeArg::Harmonic
        } else if a < 0.0 {
            RegimeArg::Inverted
        } else {
            RegimeArg::Linear
        };
        if let Some(r) = args.regime {
            if r != implied {
                return Err(usage(format!("--regime {r:?} disagrees with A = {a}")));
            }
        }
        a
    } else {
        let regime = match (args.regime, args.inverted) {
            (Some(RegimeArg::Harmonic), true) | (Some(RegimeArg::Linear), true) => {
                return Err(usage("--inverted conflicts with the given --regime"))
            }
            (Some(r), _) => r,
            (None, true) => RegimeArg::Inverted,
            (None, false) if args.omega.is_some() => RegimeArg::Harmonic,
            (None, false) => RegimeArg::Linear,
        };
        let omega = positive("omega", args.omega.unwrap_or(1.0))?;
        match regime {
            RegimeArg::Linear => {
                if args.omega.is_some() {
                    return Err(usage("--omega given for the linear regime"));
                }
                0.0
            }
            RegimeArg::Harmonic => 0.5 * mass * omega * omega,
            RegimeArg::Inverted => -0.5 * mass * omega * omega,
        }
    };
    Ok(PotentialSpec64::new(a, b, 0.0, mass)?)
}

/// Oscillator frequency of `pot`, or 1 for the linear regime (used to pick
/// packet widths for presets).
fn width_frequency(pot: &PotentialSpec64) -> f64 {
    if pot.a == 0.0 {
        1.0
    } else {
        (2.0 * pot.a.abs() / pot.mass).sqrt()
    }
}

/// The single initial condition given by flags (or `None` if there is none).
pub fn resolve_initial(args: &RunArgs, pot: &PotentialSpec64, hbar: f64) -> CliResult<Option<Initial>> {
    let given = [args.init_moments.is_some(), args.init_gaussian.is_some(), args.preset.is_some()];
    match given.iter().filter(|&&g| g).count() {
        0 => return Ok(None),
        1 => {}
        _ => return Err(usage("give exactly one of --init-moments, --init-gaussian, --preset")),
    }
    if let Some(raw) = &args.init_moments {
        let v = parse_list("init-moments", raw, 3)?;
        return Ok(Some(Initial::Moments(UncertaintyState64::new(v[0], v[1], v[2], hbar)?)));
    }
    if let Some(raw) = &args.init_gaussian {
        let v = parse_list("init-gaussian", raw, 2)?;
        return Ok(Some(Initial::Gaussian { alpha: positive("alpha", v[0])?, a: v[1] }));
    }
    let preset = args.preset.as_deref().unwrap_or_default();
    let (name, arg) = match preset.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (preset, None),
    };
    let arg_value = |what: &str| -> CliResult<f64> {
        let raw = arg.ok_or_else(|| usage(format!("preset {name} needs a value, e.g. {name}:{what}")))?;
        parse_value(name, raw)
    };
    let coherent_alpha = hbar / (pot.mass * width_frequency(pot));
    let initial = match name {
        "coherent" => {
            if arg.is_some() {
                return Err(usage("preset coherent takes no value"));
            }
            if pot.a == 0.0 {
                return Err(usage("preset coherent needs an oscillator potential"));
            }
            Initial::Gaussian { alpha: coherent_alpha, a: 0.0 }
        }
        "squeezed" => Initial::Gaussian { alpha: positive("squeezed alpha", arg_value("0.5")?)?, a: 0.0 },
        "superposition" => {
            Initial::Superposition { alpha: coherent_alpha, separation: finite("separation", arg_value("4")?)? }
        }
        "k" => {
            let k = finite("k", arg_value("1.2")?)?;
            let regime = if pot.a == 0.0 {
                Regime::Linear
            } else if pot.a > 0.0 {
                Regime::Harmonic(width_frequency(pot))
            } else {
                Regime::Inverted(width_frequency(pot))
            };
            let orbit = CanonicalOrbit::gaussian(regime, pot.mass, hbar, k)?;
            let s = qwplab_core::canonical_orbit_state(&orbit, 0.0)?;
            Initial::Gaussian { alpha: 2.0 * s.dx2(), a: 0.0 }
        }
        _ => return Err(usage(format!("unknown preset {preset:?}"))),
    };
    Ok(Some(initial))
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> CliResult<Self> {
        let potential = resolve_potential(args)?;
        let hbar = positive("hbar", args.hbar.unwrap_or(1.0))?;
        let initial = resolve_initial(args, &potential, hbar)?
            .ok_or_else(|| usage("no initial condition: give --init-moments, --init-gaussian or --preset"))?;
        let t0 = finite("t0", args.t0.unwrap_or(0.0))?;
        let t1 = finite("t1", args.t1.unwrap_or(1.0))?;
        let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
        if t0 != t1 && samples < 2 {
            return Err(usage("need at least 2 time samples"));
        }
        if let Some(dt) = args.dt {
            positive("dt", dt)?;
        }
        Ok(Self {
            potential,
            hbar,
            initial,
            mean: PhasePoint64::new(finite("x0", args.x0.unwrap_or(0.0))?, finite("p0", args.p0.unwrap_or(0.0))?),
            t0,
            t1,
            samples,
            mode: args.mode.unwrap_or_default(),
            oracle: args.oracle.unwrap_or_default(),
            dt: args.dt,
            richardson: args.richardson,
            grid_n: args.grid_n,
            out: args.out.clone(),
        })
    }

    /// Output times; a single row when the span is empty.
    pub fn times(&self) -> Vec<f64> {
        if self.t0 == self.t1 {
            return vec![self.t0];
        }
        let n = self.samples;
        let h = (self.t1 - self.t0) / (n - 1) as f64;
        (0..n).map(|i| if i == n - 1 { self.t1 } else { self.t0 + h * i as f64 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> RunArgs {
        RunArgs::default()
    }

    #[test]
    fn defaults_file_syntax() {
        let map = parse_defaults("# comment\n[run]\nomega = 2\ninit_moments = \"1,2,-1\"\nmode='ode' # trailing\n\n")
            .unwrap();
        assert_eq!(map["omega"], "2");
        assert_eq!(map["init-moments"], "1,2,-1");
        assert_eq!(map["mode"], "ode");
        assert!(parse_defaults("bogus = 1").is_err());
        assert!(parse_defaults("no equals sign").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let map = parse_defaults("omega = 2\nmass = 3\npreset = coherent\nmode = grid").unwrap();
        let mut a = RunArgs { omega: Some(0.5), init_moments: Some("1,1,0".into()), ..args() };
        a.merge_defaults(&map).unwrap();
        assert_eq!(a.omega, Some(0.5));
        assert_eq!(a.mass, Some(3.0));
        assert_eq!(a.preset, None);
        assert_eq!(a.mode, Some(Mode::Grid));
    }

    #[test]
    fn potential_resolution() {
        let p = resolve_potential(&RunArgs { omega: Some(2.0), mass: Some(0.5), ..args() }).unwrap();
        assert_eq!(p.a, 1.0);
        let p = resolve_potential(&RunArgs { omega: Some(2.0), inverted: true, ..args() }).unwrap();
        assert_eq!(p.a, -2.0);
        assert_eq!(resolve_potential(&args()).unwrap().a, 0.0);
        assert!(resolve_potential(&RunArgs { a: Some(1.0), regime: Some(RegimeArg::Inverted), ..args() }).is_err());
        assert!(resolve_potential(&RunArgs { regime: Some(RegimeArg::Harmonic), inverted: true, ..args() }).is_err());
        assert!(resolve_potential(&RunArgs { mass: Some(-1.0), ..args() }).is_err());
    }

    #[test]
    fn presets() {
        let pot = PotentialSpec64::harmonic(2.0, 0.5);
        let init = |p: &str| resolve_initial(&RunArgs { preset: Some(p.into()), ..args() }, &pot, 1.0).unwrap().unwrap();
        assert_eq!(init("coherent"), Initial::Gaussian { alpha: 1.0, a: 0.0 });
        assert_eq!(init("squeezed:0.25"), Initial::Gaussian { alpha: 0.25, a: 0.0 });
        assert_eq!(init("superposition:3"), Initial::Superposition { alpha: 1.0, separation: 3.0 });
        // k = 1 is the coherent state
        match init("k:1") {
            Initial::Gaussian { alpha, a } => {
                assert!((alpha - 1.0).abs() < 1e-12);
                assert_eq!(a, 0.0);
            }
            other => panic!("{other:?}"),
        }
        let bad = |p: &str| resolve_initial(&RunArgs { preset: Some(p.into()), ..args() }, &pot, 1.0);
        assert!(bad("squeezed").is_err());
        assert!(bad("nonsense").is_err());
        assert!(bad("k:0.5").is_err());
    }

    #[test]
    fn exactly_one_initial_condition() {
        let pot = PotentialSpec64::free(1.0);
        let two = RunArgs { preset: Some("squeezed:1".into()), init_gaussian: Some("1,0".into()), ..args() };
        assert!(resolve_initial(&two, &pot, 1.0).is_err());
        assert!(RunConfig::from_args(&args()).is_err());
        let violating = RunArgs { init_moments: Some("0.1,0.1,0".into()), ..args() };
        let err = RunConfig::from_args(&violating).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_PHYSICS);
    }

    #[test]
    fn time_grid() {
        let a = RunArgs { init_gaussian: Some("1,0".into()), t0: Some(1.0), t1: Some(2.0), samples: Some(5), ..args() };
        let cfg = RunConfig::from_args(&a).unwrap();
        assert_eq!(cfg.times(), vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        let cfg = RunConfig::from_args(&RunArgs { t1: Some(1.0), samples: Some(1), ..a.clone() }).unwrap();
        assert_eq!(cfg.times(), vec![1.0]);
        assert!(RunConfig::from_args(&RunArgs { samples: Some(1), ..a }).is_err());
    }
}
