//! Command-line front end: spectra, packet trajectories and the
//! verification suite, exported as CSV/JSON for external tooling.
//!
//! Exit codes: 0 success, 2 config error, 3 check failure, 4 numeric
//! failure. All outputs are byte-identical across reruns with the same
//! config and seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Deserialize;

use majorana1d::dirac::{ConfiningBC, Grid, PhysicsParams, SpinorField};
use majorana1d::impenetrable_box::{box_spectrum, build_box_packet, evolve_box, BoxModeKind, BoxPacket};
use majorana1d::linear_potential::{
    build_linear_packet, evolve_linear, linear_domain_grid, linear_spectrum, LinearPacket,
};
use majorana1d::periodic_box::{
    build_periodic_packet, evolve_periodic, MomentumLabel, PeriodicPacket,
};
use majorana1d::rest_box::{rest_evolve, RestPacket};
use majorana1d::verify::{run_suite, Scenario, VerifyBudget};

type C64 = Complex<f64>;

#[derive(Parser)]
#[command(name = "majorana1d", version, about = "One-dimensional Majorana fermion toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the energy spectrum of the configured scenario as CSV.
    Spectrum(RunArgs),
    /// Evolve a packet and write the sampled trajectory as CSV.
    Evolve(RunArgs),
    /// Run the invariant suite and write the JSON report.
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the `out` field of the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Override theta (radians) from the config.
    #[arg(long)]
    theta: Option<f64>,
}

enum Failure {
    Config(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<majorana1d::Error> for Failure {
    fn from(e: majorana1d::Error) -> Self {
        if e.is_input() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

// ----- configuration -------------------------------------------------------

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicsConfig {
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    c: f64,
    #[serde(default = "one")]
    m: f64,
    #[serde(default)]
    l: Option<f64>,
    #[serde(default)]
    k: Option<f64>,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        PhysicsConfig {
            hbar: 1.0,
            c: 1.0,
            m: 1.0,
            l: None,
            k: None,
        }
    }
}

#[derive(Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientEntry {
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    /// Required for spectrum and evolve; verify falls back to
    /// `scenarios` (or all four) when absent.
    #[serde(default)]
    scenario: Option<String>,
    #[serde(default)]
    physics: PhysicsConfig,
    /// Confining condition for the box scenario: dirichlet_lower,
    /// dirichlet_upper, mixed_a or mixed_b.
    #[serde(default)]
    bc: Option<String>,
    #[serde(default)]
    coefficients: Option<Vec<CoefficientEntry>>,
    /// Zero-mode amplitude [re, im] (linear scenario) or the single
    /// packet amplitude (rest scenario).
    #[serde(default)]
    c0: Option<[f64; 2]>,
    /// Evanescent-mode amplitude [re, im] (mixed_a box only).
    #[serde(default)]
    c_q: Option<[f64; 2]>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    theta: Option<f64>,
    #[serde(default)]
    grid_points: Option<usize>,
    #[serde(default)]
    n_max: Option<usize>,
    #[serde(default)]
    time_samples: Option<Vec<f64>>,
    #[serde(default)]
    out: Option<PathBuf>,
    /// Scenario tags for the verify command; defaults to all four.
    #[serde(default)]
    scenarios: Option<Vec<String>>,
    #[serde(default)]
    budget: Option<VerifyBudget>,
}

struct Run {
    config: RunConfig,
    scenario: Option<Scenario>,
    params: PhysicsParams<f64>,
    seed: Option<u64>,
    theta: Option<f64>,
    out: PathBuf,
}

impl Run {
    fn scenario(&self) -> Result<Scenario, Failure> {
        self.scenario
            .ok_or_else(|| config_err("this command needs a \"scenario\" field in the config"))
    }

    fn theta_or(&self, fallback: f64) -> f64 {
        self.theta.unwrap_or(fallback)
    }
}

fn load(args: &RunArgs) -> Result<Run, Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| config_err(format!("cannot read {}: {e}", args.config.display())))?;
    let config: RunConfig = serde_json::from_str(&text)
        .map_err(|e| config_err(format!("{}: {e}", args.config.display())))?;
    let scenario: Option<Scenario> = config
        .scenario
        .as_deref()
        .map(str::parse)
        .transpose()?;
    let phys = config.physics;
    if !(phys.hbar > 0.0 && phys.c > 0.0 && phys.m >= 0.0) {
        return Err(config_err("physics: hbar and c must be positive, m non-negative"));
    }
    let compton = if phys.m > 0.0 {
        phys.hbar / (phys.m * phys.c)
    } else {
        1.0
    };
    let l = phys.l.unwrap_or(match scenario {
        Some(Scenario::Periodic) => 2.0 * std::f64::consts::PI * compton,
        _ => 2.0 * compton,
    });
    let mut params = PhysicsParams {
        hbar: phys.hbar,
        c: phys.c,
        m: phys.m,
        l,
        k: phys.k,
    };
    if scenario == Some(Scenario::Linear) && params.k.is_none() {
        params.k = Some(params.mc2().powi(2) / (params.hbar * params.c));
    }
    params.validate()?;
    let out = args
        .out
        .clone()
        .or_else(|| config.out.clone())
        .ok_or_else(|| config_err("no output path: pass --out or set \"out\" in the config"))?;
    let seed = args.seed.or(config.seed);
    let theta = args.theta.or(config.theta);
    if let Some(t) = theta {
        if !t.is_finite() {
            return Err(config_err("theta must be finite"));
        }
    }
    Ok(Run {
        config,
        scenario,
        params,
        seed,
        theta,
        out,
    })
}

fn parse_bc(run: &Run) -> Result<ConfiningBC, Failure> {
    let tag = run
        .config
        .bc
        .as_deref()
        .ok_or_else(|| config_err("the box scenario needs a \"bc\" field"))?;
    match tag {
        "dirichlet_lower" => Ok(ConfiningBC::DirichletLower),
        "dirichlet_upper" => Ok(ConfiningBC::DirichletUpper),
        "mixed_a" => Ok(ConfiningBC::MixedA),
        "mixed_b" => Ok(ConfiningBC::MixedB),
        other => Err(config_err(format!(
            "unknown bc {other:?}; expected dirichlet_lower, dirichlet_upper, mixed_a or mixed_b"
        ))),
    }
}

// ----- output formatting ----------------------------------------------------

/// 17 significant digits: enough to reproduce any f64 exactly.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_out(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))
}

// ----- spectrum --------------------------------------------------------------

fn cmd_spectrum(run: &Run) -> Result<(), Failure> {
    let mut csv = String::from("kind,label_value,energy_plus,energy_minus,residual\n");
    let n_max = run.config.n_max.unwrap_or(5);
    let mut row = |kind: &str, label: f64, plus: f64, minus: f64, residual: f64| {
        let _ = writeln!(
            csv,
            "{kind},{},{},{},{}",
            fmt(label),
            fmt(plus),
            fmt(minus),
            fmt(residual)
        );
    };
    match run.scenario()? {
        Scenario::Rest => {
            let e = run.params.mc2();
            row("rest", 0.0, e, -e, 0.0);
        }
        Scenario::Periodic => {
            for n in -(n_max as i64)..=n_max as i64 {
                let label = MomentumLabel::new(n, &run.params);
                row("plane", label.p, label.energy, -label.energy, 0.0);
            }
        }
        Scenario::Box => {
            let bc = parse_bc(run)?;
            for entry in box_spectrum(bc, &run.params, n_max.max(1))? {
                let kind = match entry.kind {
                    BoxModeKind::Oscillatory => "oscillatory",
                    BoxModeKind::Evanescent => "evanescent",
                };
                row(kind, entry.value, entry.energy, -entry.energy, entry.residual);
            }
        }
        Scenario::Linear => {
            for entry in linear_spectrum(&run.params, n_max.max(1))? {
                let minus = if entry.n == 0 { 0.0 } else { -entry.energy };
                let kind = if entry.n == 0 { "zero_mode" } else { "ladder" };
                row(kind, entry.n as f64, entry.energy, minus, 0.0);
            }
        }
    }
    write_out(&run.out, &csv)
}

// ----- evolve ----------------------------------------------------------------

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn symmetric(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * unit(rng) - 1.0
}

fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(symmetric(rng), symmetric(rng))
}

enum Packet {
    Rest(RestPacket<f64>),
    Periodic(PeriodicPacket<f64>),
    Boxed(Box<BoxPacket<f64>>),
    Linear(Box<LinearPacket<f64>>),
}

impl Packet {
    fn evolve(&self, t: f64) -> SpinorField<f64> {
        match self {
            Packet::Rest(p) => rest_evolve(p, t),
            Packet::Periodic(p) => evolve_periodic(p, t),
            Packet::Boxed(p) => evolve_box(p, t),
            Packet::Linear(p) => evolve_linear(p, t),
        }
    }
}

fn explicit_coeffs(run: &Run) -> Result<Option<Vec<CoefficientEntry>>, Failure> {
    match (&run.config.coefficients, run.seed) {
        (Some(_), Some(_)) => Err(config_err(
            "give either explicit coefficients or a seed, not both",
        )),
        (Some(list), None) => Ok(Some(list.clone())),
        (None, _) => Ok(None),
    }
}

fn build_packet(run: &Run) -> Result<Packet, Failure> {
    let params = run.params;
    let theta = run.theta_or(0.0);
    let grid_points = run.config.grid_points.unwrap_or(2001);
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed.unwrap_or(0));
    let coeffs = explicit_coeffs(run)?;
    match run.scenario()? {
        Scenario::Rest => {
            if coeffs.is_some() {
                return Err(config_err(
                    "the rest packet has a single amplitude; set c0 instead of coefficients",
                ));
            }
            let amp = 0.5f64.sqrt();
            let c_plus = match (run.config.c0, run.seed) {
                (Some([re, im]), _) => C64::new(re, im),
                (None, Some(_)) => C64::from_polar(amp, theta / 2.0 + unit(&mut rng)),
                (None, None) => C64::from_polar(amp, theta / 2.0),
            };
            let grid = Grid::uniform(0.0, params.l, grid_points)?;
            Ok(Packet::Rest(RestPacket::new(c_plus, theta, params, grid)?))
        }
        Scenario::Periodic => {
            let grid = Grid::ring(0.0, params.l, grid_points)?;
            let map: BTreeMap<i64, C64> = match (&coeffs, run.seed) {
                (Some(list), _) => list
                    .iter()
                    .map(|e| (e.n, C64::new(e.re, e.im)))
                    .collect(),
                (None, Some(_)) => (0..4)
                    .map(|_| {
                        let n = (rng.next_u64() % 7) as i64 - 3;
                        (n, random_complex(&mut rng))
                    })
                    .collect(),
                (None, None) => [(-1i64, C64::new(0.5, 0.0)), (1, C64::new(0.5, 0.0))]
                    .into_iter()
                    .collect(),
            };
            let (packet, _) = build_periodic_packet(&map, theta, &params, &grid, true)?;
            Ok(Packet::Periodic(packet))
        }
        Scenario::Box => {
            let bc = parse_bc(run)?;
            let grid = Grid::uniform(0.0, params.l, grid_points)?;
            let mut map: BTreeMap<usize, C64> = BTreeMap::new();
            let mut c_q = run.config.c_q.map(|[re, im]| C64::new(re, im));
            match (&coeffs, run.seed) {
                (Some(list), _) => {
                    for e in list {
                        if e.n < 1 {
                            return Err(config_err("box mode indices start at 1"));
                        }
                        map.insert(e.n as usize, C64::new(e.re, e.im));
                    }
                }
                (None, Some(_)) => {
                    for n in 1..=4usize {
                        map.insert(n, random_complex(&mut rng));
                    }
                    if bc == ConfiningBC::MixedA && params.lambda() < 1.0 && c_q.is_none() {
                        c_q = Some(random_complex(&mut rng));
                    }
                }
                (None, None) => {
                    map.insert(1, C64::new(0.5, 0.0));
                    map.insert(2, C64::new(0.5, 0.0));
                }
            }
            // the library demands the exact sum rule; the front end scales
            let total: f64 = map.values().map(|c| c.norm_sqr()).sum::<f64>()
                + c_q.map_or(0.0, |c| c.norm_sqr());
            if total <= 0.0 {
                return Err(config_err("box packet needs a nonzero coefficient"));
            }
            let fix = (0.5 / total).sqrt();
            for c in map.values_mut() {
                *c *= fix;
            }
            if let Some(c) = c_q.as_mut() {
                *c *= fix;
            }
            let (packet, _) = build_box_packet(bc, &map, c_q, theta, &params, &grid)?;
            Ok(Packet::Boxed(Box::new(packet)))
        }
        Scenario::Linear => {
            let grid = linear_domain_grid(&params, 8, grid_points)?;
            let (c0, map) = match (&coeffs, run.seed) {
                (Some(list), _) => {
                    let c0 = run
                        .config
                        .c0
                        .map(|[re, im]| C64::new(re, im))
                        .unwrap_or(C64::new(0.0, 0.0));
                    let mut map = BTreeMap::new();
                    for e in list {
                        if e.n < 1 {
                            return Err(config_err(
                                "linear ladder indices start at 1; the zero mode is c0",
                            ));
                        }
                        map.insert(e.n as usize, C64::new(e.re, e.im));
                    }
                    (c0, map)
                }
                (None, Some(_)) => {
                    let c0 = C64::from_polar(0.3 + 0.5 * unit(&mut rng), theta / 2.0);
                    let mut map = BTreeMap::new();
                    for n in 1..=4usize {
                        map.insert(n, random_complex(&mut rng));
                    }
                    let want = 0.5 * (1.0 - c0.norm_sqr());
                    let total: f64 = map.values().map(|c| c.norm_sqr()).sum();
                    let fix = (want / total).sqrt();
                    for c in map.values_mut() {
                        *c *= fix;
                    }
                    (c0, map)
                }
                (None, None) => {
                    let c0 = run
                        .config
                        .c0
                        .map(|[re, im]| C64::new(re, im))
                        .unwrap_or_else(|| C64::from_polar(1.0, theta / 2.0));
                    (c0, BTreeMap::new())
                }
            };
            let (packet, _) = build_linear_packet(c0, &map, theta, &params, &grid)?;
            Ok(Packet::Linear(Box::new(packet)))
        }
    }
}

fn cmd_evolve(run: &Run) -> Result<(), Failure> {
    let packet = build_packet(run)?;
    let times = run
        .config
        .time_samples
        .clone()
        .unwrap_or_else(|| vec![0.0, 1.0, 2.0]);
    if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
        return Err(config_err("time_samples must be a non-empty list of finite times"));
    }
    let mut csv = String::from("t,x,re_phi1,im_phi1,re_phi2,im_phi2,density\n");
    for &t in &times {
        let psi = packet.evolve(t);
        for (i, v) in psi.values.iter().enumerate() {
            let density = v[0].norm_sqr() + v[1].norm_sqr();
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                fmt(t),
                fmt(psi.grid.x(i)),
                fmt(v[0].re),
                fmt(v[0].im),
                fmt(v[1].re),
                fmt(v[1].im),
                fmt(density)
            );
        }
    }
    write_out(&run.out, &csv)
}

// ----- verify ----------------------------------------------------------------

fn cmd_verify(run: &Run) -> Result<ExitCode, Failure> {
    let scenarios: Vec<Scenario> = match (&run.config.scenarios, run.scenario) {
        (Some(tags), _) => tags
            .iter()
            .map(|t| t.parse::<Scenario>())
            .collect::<Result<_, _>>()?,
        (None, Some(single)) => vec![single],
        (None, None) => Scenario::ALL.to_vec(),
    };
    let seed = run.seed.unwrap_or(0x4d61_6a31);
    let theta = run.theta_or(0.7);
    let budget = run.config.budget.unwrap_or_default();
    // the suite derives its own geometry per scenario from the base units
    let base = PhysicsParams {
        l: 1.0,
        ..run.params
    };
    let report = run_suite(&scenarios, &base, seed, theta, &budget)?;
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::Numeric(format!("report serialization: {e}")))?;
    text.push('\n');
    write_out(&run.out, &text)?;
    if report.all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(3))
    }
}

// ----- entry point -------------------------------------------------------------

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Spectrum(args) => {
            let run = load(&args)?;
            cmd_spectrum(&run)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve(args) => {
            let run = load(&args)?;
            cmd_evolve(&run)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let run = load(&args)?;
            cmd_verify(&run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
