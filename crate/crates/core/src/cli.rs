//! Command-line front end. [`run`] is the whole program minus process I/O,
//! so it can be driven from tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::existence::{beta_limit_curve, box_energy, region_scan, uniform_grid, BetaLimitOptions};
use crate::harmonic::{harmonic_linear, harmonic_minimum};
use crate::model::{DeformationParams, Nondimensionalization, PhysicalContext};
use crate::numeric::ScanGrid;
use crate::oracle::{oracle_min, OracleOptions};
use crate::potential::{PotentialEvaluator, PotentialSpec};
use crate::solver::{linear_coefficients, linear_solve, solve_full, SolverOptions};

#[derive(Debug, Parser)]
#[command(
    name = "gupbound",
    version,
    about = "Ground-state lower bounds under a deformed uncertainty relation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Closed-form bound for the harmonic oscillator
    SolveHarmonic,
    /// Full numeric bound for a general potential, with the linear estimate
    Solve,
    /// First-order expansion of the minimum in alpha and beta
    Linearize,
    /// Existence map over a grid of (alpha, beta)
    ScanRegion,
    /// Largest beta with a solution for power-law wells
    BetaLimit,
    /// Infinite-well level in the beta'-only model
    BoxEnergy,
    /// Direct minimization along the boundary of the allowed region
    Oracle,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::SolveHarmonic => "solve-harmonic",
            Self::Solve => "solve",
            Self::Linearize => "linearize",
            Self::ScanRegion => "scan-region",
            Self::BetaLimit => "beta-limit",
            Self::BoxEnergy => "box-energy",
            Self::Oracle => "oracle",
        }
    }

    /// Flags the command reads; anything else supplied is rejected.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            Self::SolveHarmonic => &[
                "alpha",
                "beta",
                "alpha-prime",
                "beta-prime",
                "hbar",
                "mass",
                "omega",
            ],
            Self::Solve | Self::Oracle => &[
                "alpha",
                "beta",
                "alpha-prime",
                "beta-prime",
                "potential",
                "n",
                "v0",
                "hbar",
                "mass",
                "a",
                "tol",
                "grid-min",
                "grid-max",
                "grid-points",
            ],
            Self::Linearize => &[
                "alpha",
                "beta",
                "alpha-prime",
                "beta-prime",
                "potential",
                "n",
                "v0",
                "hbar",
                "mass",
                "a",
            ],
            Self::ScanRegion => &[
                "n",
                "v0",
                "region-max",
                "region-points",
                "grid-min",
                "grid-max",
                "grid-points",
            ],
            Self::BetaLimit => &[
                "n",
                "v0",
                "alpha",
                "tol",
                "grid-min",
                "grid-max",
                "grid-points",
            ],
            Self::BoxEnergy => &["beta-prime", "k", "hbar", "mass", "a"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// Dimensionless minimal-length parameter
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Dimensionless minimal-momentum parameter
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Physical alpha' (converted with the command's units)
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha_prime: Option<f64>,
    /// Physical beta'
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta_prime: Option<f64>,
    /// Even polynomial in x, `harmonic(w)` or `power(n, v0)`
    #[arg(long, global = true)]
    potential: Option<String>,
    /// Power-law order: V = v0 x^(2n); beta-limit takes a comma list
    #[arg(long, global = true, value_delimiter = ',')]
    n: Vec<u32>,
    /// Power-law strength (default 1)
    #[arg(long, global = true, allow_negative_numbers = true)]
    v0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mass: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Length scale of the well
    #[arg(long, global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    hbar: Option<f64>,
    /// Root tolerance (solve), xi tolerance (oracle) or bracket width (beta-limit)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    grid_min: Option<f64>,
    #[arg(long, global = true)]
    grid_max: Option<f64>,
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// Upper end of both axes of the region scan (default 1.2)
    #[arg(long, global = true)]
    region_max: Option<f64>,
    /// Points per axis of the region scan (default 200)
    #[arg(long, global = true)]
    region_points: Option<usize>,
    /// Box level (default 1)
    #[arg(long, global = true)]
    k: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// File of `key = value` lines supplying any flag; the command line wins
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "beta",
    "alpha-prime",
    "beta-prime",
    "potential",
    "n",
    "v0",
    "mass",
    "omega",
    "a",
    "hbar",
    "tol",
    "grid-min",
    "grid-max",
    "grid-points",
    "region-max",
    "region-points",
    "k",
    "format",
    "out",
];

impl Flags {
    /// Supplied physics flags with their parsed values.
    fn supplied(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        put("alpha", self.alpha.map(Value::from));
        put("beta", self.beta.map(Value::from));
        put("alpha-prime", self.alpha_prime.map(Value::from));
        put("beta-prime", self.beta_prime.map(Value::from));
        put("potential", self.potential.clone().map(Value::from));
        put(
            "n",
            match self.n.as_slice() {
                [] => None,
                [n] => Some(Value::from(*n)),
                ns => Some(Value::from(ns.to_vec())),
            },
        );
        put("v0", self.v0.map(Value::from));
        put("mass", self.mass.map(Value::from));
        put("omega", self.omega.map(Value::from));
        put("a", self.a.map(Value::from));
        put("hbar", self.hbar.map(Value::from));
        put("tol", self.tol.map(Value::from));
        put("grid-min", self.grid_min.map(Value::from));
        put("grid-max", self.grid_max.map(Value::from));
        put("grid-points", self.grid_points.map(Value::from));
        put("region-max", self.region_max.map(Value::from));
        put("region-points", self.region_points.map(Value::from));
        put("k", self.k.map(Value::from));
        m
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(kind: &str, message: &str) -> Self {
        let code = if kind == Error::NoBoundState(String::new()).kind() {
            2
        } else {
            1
        };
        let record = json!({ "error": kind, "message": message });
        Self {
            code,
            stdout: String::new(),
            stderr: format!("{record}\n"),
        }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Self::error(e.kind(), &e.to_string())
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(o) => return o,
    };
    if let Some(path) = &cli.flags.config {
        match config_args(path, &argv) {
            Ok(extra) => argv.extend(extra),
            Err(e) => return e.into(),
        }
    }
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(o) => return o,
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => e.into(),
    }
}

fn parse(argv: &[OsString]) -> std::result::Result<Cli, Outcome> {
    Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                code: 0,
                stdout: e.to_string(),
                stderr: String::new(),
            },
            _ => {
                let text = e.to_string();
                let first = text
                    .lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ")
                    .to_string();
                Outcome::error("usage", &first)
            }
        }
    })
}

/// Extra argv entries for config keys not already given on the command line.
fn config_args(path: &Path, argv: &[OsString]) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let given = |key: &str| {
        let flag = format!("--{key}");
        argv.iter().any(|a| {
            let a = a.to_string_lossy();
            a == flag || a.starts_with(&format!("{flag}="))
        })
    };
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim().trim_matches('"'));
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!(
                "config line {}: unknown key '{key}'",
                lineno + 1
            )));
        }
        if !given(key) {
            out.push(OsString::from(format!("--{key}={value}")));
        }
    }
    Ok(out)
}

struct Ctx<'a> {
    flags: &'a Flags,
    params: BTreeMap<String, Value>,
}

impl Ctx<'_> {
    fn f64(&mut self, key: &str, value: Option<f64>, default: f64) -> f64 {
        let v = value.unwrap_or(default);
        self.params.insert(key.to_string(), Value::from(v));
        v
    }

    fn single_n(&self) -> Result<Option<u32>> {
        match self.flags.n.as_slice() {
            [] => Ok(None),
            [n] => Ok(Some(*n)),
            _ => Err(Error::Config("this command takes a single --n".into())),
        }
    }

    fn potential(&mut self) -> Result<(PotentialSpec, PotentialEvaluator)> {
        let n = self.single_n()?;
        let spec = match (&self.flags.potential, n) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either --potential or --n/--v0, not both".into(),
                ))
            }
            (Some(_), None) if self.flags.v0.is_some() => {
                return Err(Error::Config(
                    "--v0 only applies to the --n shorthand".into(),
                ))
            }
            (Some(text), None) => PotentialSpec::parse(text)?,
            (None, Some(n)) => {
                let v0 = self.f64("v0", self.flags.v0, 1.0);
                PotentialSpec::power_law(n, v0)
            }
            (None, None) => return Err(Error::Config("missing --potential or --n".into())),
        };
        let eval = spec.evaluator()?;
        Ok((spec, eval))
    }

    fn deformation(&self, units: &Nondimensionalization) -> Result<DeformationParams> {
        let f = self.flags;
        let dimensionless = f.alpha.is_some() || f.beta.is_some();
        let physical = f.alpha_prime.is_some() || f.beta_prime.is_some();
        match (dimensionless, physical) {
            (true, true) => Err(Error::Config(
                "give either --alpha/--beta or --alpha-prime/--beta-prime".into(),
            )),
            (_, true) => DeformationParams::from_physical(
                f.alpha_prime.unwrap_or(0.0),
                f.beta_prime.unwrap_or(0.0),
                units,
            ),
            _ => DeformationParams::new(f.alpha.unwrap_or(0.0), f.beta.unwrap_or(0.0)),
        }
    }

    fn well(&mut self) -> Result<PhysicalContext> {
        let h = self.f64("hbar", self.flags.hbar, 1.0);
        let m = self.f64("mass", self.flags.mass, 1.0);
        let a = self.f64("a", self.flags.a, 1.0);
        PhysicalContext::well(h, m, a, None)
    }

    fn grid(&mut self, default: ScanGrid) -> Result<ScanGrid> {
        let min = self.f64("grid-min", self.flags.grid_min, default.min);
        let max = self.f64("grid-max", self.flags.grid_max, default.max);
        let points = self.flags.grid_points.unwrap_or(default.points);
        self.params
            .insert("grid-points".into(), Value::from(points));
        ScanGrid::new(min, max, points)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

enum Payload {
    Json(Value),
    Csv(String),
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let command = cli.command;
    let supplied = cli.flags.supplied();
    if let Some(bad) = supplied
        .keys()
        .find(|k| !command.accepts().contains(&k.as_str()))
    {
        return Err(Error::Config(format!(
            "--{bad} is not used by {}",
            command.name()
        )));
    }
    let mut ctx = Ctx {
        flags: &cli.flags,
        params: supplied,
    };
    let tabular = matches!(command, Command::ScanRegion | Command::BetaLimit);
    let format = cli
        .flags
        .format
        .unwrap_or(if tabular { Format::Csv } else { Format::Json });
    if format == Format::Csv && !tabular {
        return Err(Error::Config(format!(
            "{} only writes JSON",
            command.name()
        )));
    }

    let payload = match command {
        Command::SolveHarmonic => {
            let h = ctx.f64("hbar", cli.flags.hbar, 1.0);
            let m = ctx.f64("mass", cli.flags.mass, 1.0);
            let w = ctx.f64("omega", cli.flags.omega, 1.0);
            let phys = PhysicalContext::harmonic(h, m, w)?;
            let units = phys.nondimensionalize_harmonic()?;
            let d = ctx.deformation(&units)?;
            let r = harmonic_minimum(d.alpha, d.beta)?.with_units(&units);
            let (ap, bp) = d.to_physical(&units);
            let linear = harmonic_linear(&phys, ap, bp)?;
            Payload::Json(merge(
                to_value(&r),
                json!({ "deformation": d, "units": units, "linear_energy_physical": linear }),
            ))
        }
        Command::Solve | Command::Oracle | Command::Linearize => {
            let (spec, pot) = ctx.potential()?;
            let phys = ctx.well()?;
            let units = phys.nondimensionalize_general()?;
            let d = ctx.deformation(&units)?;
            let extra = json!({ "deformation": d, "units": units, "potential": spec.to_string() });
            let body = match command {
                Command::Solve => {
                    let opts = SolverOptions {
                        grid: ctx.grid(ScanGrid::solver_default())?,
                        tol: ctx.f64("tol", cli.flags.tol, 1e-12),
                    };
                    // the oracle's existence verdict is reported alongside, never substituted
                    let oracle = match oracle_min(&pot, d.alpha, d.beta, &OracleOptions::default())
                    {
                        Ok(o) => Some(o.energy_nd),
                        Err(Error::NoBoundState(_)) => None,
                        Err(e) => return Err(e),
                    };
                    let r = match solve_full(&pot, d.alpha, d.beta, &opts) {
                        Ok(r) => r.with_units(&units),
                        Err(Error::NoBoundState(msg)) => {
                            return Err(Error::NoBoundState(match oracle {
                                Some(e) => {
                                    format!("{msg}; existence disagreement: oracle found E = {e}")
                                }
                                None => msg,
                            }))
                        }
                        Err(e) => return Err(e),
                    };
                    let lin = linear_solve(&pot, d.alpha, d.beta)?.with_units(&units);
                    let gap = r.energy_nd - lin.energy_nd;
                    merge(
                        to_value(&r),
                        json!({
                            "linear": lin,
                            "linear_gap_nd": gap,
                            "oracle_energy_nd": oracle,
                            "existence_agrees": oracle.is_some(),
                        }),
                    )
                }
                Command::Oracle => {
                    let defaults = OracleOptions::default();
                    let grid = ctx.grid(ScanGrid::new(
                        defaults.floor,
                        defaults.max,
                        defaults.points,
                    )?)?;
                    let opts = OracleOptions {
                        points: grid.points,
                        floor: grid.min,
                        max: grid.max,
                        xtol: ctx.f64("tol", cli.flags.tol, defaults.xtol),
                    };
                    to_value(&oracle_min(&pot, d.alpha, d.beta, &opts)?.with_units(&units))
                }
                _ => {
                    let c = linear_coefficients(&pot)?;
                    let (e, cb, ca) = c.energy_coefficients();
                    let energy_nd = c.energy(d.alpha, d.beta);
                    merge(
                        to_value(&c),
                        json!({
                            "energy_at_origin": e,
                            "beta_coefficient": cb,
                            "alpha_coefficient": ca,
                            "xi_min": c.xi_min(d.alpha, d.beta),
                            "energy_nd": energy_nd,
                            "e0": units.e0,
                            "energy_physical": energy_nd * units.e0,
                        }),
                    )
                }
            };
            Payload::Json(merge(body, extra))
        }
        Command::ScanRegion => {
            let n = ctx
                .single_n()?
                .ok_or_else(|| Error::Config("scan-region needs --n".into()))?;
            let v0 = ctx.f64("v0", cli.flags.v0, 1.0);
            let max = ctx.f64("region-max", cli.flags.region_max, 1.2);
            let points = cli.flags.region_points.unwrap_or(200);
            ctx.params
                .insert("region-points".into(), Value::from(points));
            if !(max > 0.0 && max.is_finite()) || points == 0 {
                return Err(Error::InvalidGrid(
                    "region needs a positive extent and at least one point".into(),
                ));
            }
            let axis = uniform_grid(max, points);
            let grid = ctx.grid(ScanGrid::scan_default())?;
            let r = region_scan(n, v0, &axis, &axis, &grid)?;
            match format {
                Format::Csv => Payload::Csv(r.to_csv()),
                Format::Json => Payload::Json(to_value(&r)),
            }
        }
        Command::BetaLimit => {
            if cli.flags.n.is_empty() {
                return Err(Error::Config("beta-limit needs --n".into()));
            }
            let v0 = ctx.f64("v0", cli.flags.v0, 1.0);
            let alpha = ctx.f64("alpha", cli.flags.alpha, 0.0);
            let defaults = BetaLimitOptions::default();
            let opts = BetaLimitOptions {
                tol: ctx.f64("tol", cli.flags.tol, defaults.tol),
                grid: ctx.grid(defaults.grid)?,
                ceiling: defaults.ceiling,
            };
            let curve = beta_limit_curve(&cli.flags.n, v0, alpha, &opts)?;
            match format {
                Format::Csv => Payload::Csv(curve.to_csv()),
                Format::Json => Payload::Json(to_value(&curve)),
            }
        }
        Command::BoxEnergy => {
            let phys = ctx.well()?;
            let bp = ctx.f64("beta-prime", cli.flags.beta_prime, 0.0);
            let k = cli.flags.k.unwrap_or(1);
            ctx.params.insert("k".into(), Value::from(k));
            let energy = box_energy(&phys, bp, k)?;
            let undeformed = box_energy(&phys, 0.0, k)?;
            Payload::Json(
                json!({ "k": k, "energy_physical": energy, "undeformed_energy_physical": undeformed }),
            )
        }
    };

    let text = match payload {
        Payload::Csv(s) => s,
        Payload::Json(result) => {
            let doc =
                json!({ "command": command.name(), "parameters": ctx.params, "result": result });
            serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
        }
    };
    match &cli.flags.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome {
                code: 0,
                stdout: String::new(),
                stderr: String::new(),
            })
        }
        None => Ok(Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> Outcome {
        run(std::iter::once("gupbound").chain(args.split_whitespace()))
    }

    fn result(o: &Outcome) -> Value {
        assert_eq!(o.code, 0, "{}", o.stderr);
        serde_json::from_str::<Value>(&o.stdout).unwrap()["result"].clone()
    }

    #[test]
    fn harmonic_origin() {
        let o = go("solve-harmonic --alpha 0 --beta 0");
        let r = result(&o);
        assert_eq!(r["energy_nd"], 1.0);
        assert_eq!(r["energy_physical"], 0.5);
        assert_eq!(r["method"], "closed_form");
    }

    #[test]
    fn parameters_echoed() {
        let o = go("solve-harmonic --alpha 0.1 --beta 0.2 --omega 3");
        let doc: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(doc["command"], "solve-harmonic");
        let p = &doc["parameters"];
        assert_eq!(p["alpha"], 0.1);
        assert_eq!(p["beta"], 0.2);
        assert_eq!(p["omega"], 3.0);
        assert_eq!(p["hbar"], 1.0);
    }

    #[test]
    fn solve_matches_oracle() {
        let s = result(&go("solve --potential x^4 --alpha 0.05 --beta 0.05"));
        let o = result(&go("oracle --potential x^4 --alpha 0.05 --beta 0.05"));
        let (es, eo) = (
            s["energy_nd"].as_f64().unwrap(),
            o["energy_nd"].as_f64().unwrap(),
        );
        assert!((es - eo).abs() < 1e-6);
        assert!(s["linear"]["energy_nd"].is_f64());
        assert_eq!(s["existence_agrees"], true);
        assert!((s["oracle_energy_nd"].as_f64().unwrap() - es).abs() < 1e-6);
    }

    #[test]
    fn linearize_power_law() {
        let r = result(&go("linearize --n 2 --v0 1"));
        assert!((r["xi0"].as_f64().unwrap() - 8f64.powf(-1.0 / 6.0)).abs() < 1e-14);
        assert_eq!(r["xi2"], 0.0);
    }

    #[test]
    fn exit_codes() {
        let o = go("solve --n 10000 --beta 0.6");
        assert_eq!(o.code, 2);
        let e: Value = serde_json::from_str(o.stderr.trim()).unwrap();
        assert_eq!(e["error"], "no_bound_state");
        assert_eq!(o.stderr.trim().lines().count(), 1);

        assert_eq!(go("solve --potential x^3").code, 1);
        assert_eq!(go("solve-harmonic --alpha 1 --beta 1").code, 1);
        assert_eq!(go("solve-harmonic --potential x^2").code, 1);
        assert_eq!(go("frobnicate").code, 1);
        assert_eq!(go("box-energy --beta-prime 1").code, 2);
        let usage: Value = serde_json::from_str(go("solve --alpha x").stderr.trim()).unwrap();
        assert_eq!(usage["error"], "usage");
    }

    #[test]
    fn csv_defaults() {
        let o = go("beta-limit --n 1,100 --v0 1");
        let lines: Vec<&str> = o.stdout.lines().collect();
        assert_eq!(lines[0], "n,beta_limit");
        assert_eq!(lines[1], "1,inf");
        let o = go("scan-region --n 1 --region-points 4");
        assert_eq!(o.stdout.lines().count(), 17);
        assert!(o.stdout.starts_with("alpha,beta,exists\n"));
        assert_eq!(go("solve-harmonic --format csv").code, 1);
    }

    #[test]
    fn box_energy_output() {
        let r = result(&go("box-energy --beta-prime 0 --k 2"));
        let expected = std::f64::consts::PI.powi(2) * 4.0 / 8.0;
        assert!((r["energy_physical"].as_f64().unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            go("solve --potential power(3,2) --alpha 0.05 --beta 0.05"),
            go("solve --potential power(3,2) --alpha 0.05 --beta 0.05")
        );
    }

    #[test]
    fn config_file_and_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(
            &path,
            "# figure run\nalpha = 0.1\nbeta = 0.1 # trailing\nomega = 2\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let doc: Value =
            serde_json::from_str(&go(&format!("solve-harmonic --config {p} --beta 0.2")).stdout)
                .unwrap();
        assert_eq!(doc["parameters"]["alpha"], 0.1);
        assert_eq!(doc["parameters"]["beta"], 0.2);
        assert_eq!(doc["parameters"]["omega"], 2.0);

        std::fs::write(&path, "gamma = 1\n").unwrap();
        let o = go(&format!("solve-harmonic --config {p}"));
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("gamma"));
    }

    #[test]
    fn out_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.json");
        let o = go(&format!("solve-harmonic --out {}", path.display()));
        assert_eq!(o.code, 0);
        assert!(o.stdout.is_empty());
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(doc["result"]["energy_nd"], 1.0);
    }
}
