//! Command-line front end. The binary only parses arguments and calls
//! [`run`]; every subcommand is an ordinary library function.
//!
//! Exit codes: 0 success, 1 failed check or aborted integration, 2 usage
//! or configuration error. Artifacts go to `output.dir`, or to the
//! directory named by `COVBRACKET_OUT_DIR` when it is set.

mod config;
mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use config::*;
pub use verify::*;

use crate::bracket::{
    amp_from_gradients, boost_invariance_check, bracket_joint, pauli_jordan_grad, pauli_jordan_lattice, qpi_from_gradients,
    refinement_study, BoostInvariance, BracketConfig, BracketReport, RefinementRow,
};
use crate::dynamics::{
    integrate, symplectic_check, total_energy, Clock, EvolutionConfig, SymplecticReport, TangentOptions, TrajectoryRow,
};
use crate::field::FieldState;
use crate::gupta_bleuler::{reduction_chain, ReductionChain};
use crate::lattice::{build_lattice, ModeLattice};
use crate::minkowski::{eta, Axis, FourVector, LorentzMap};
use crate::observable::{amp_conj_cov, amp_cov, parse, pi, polarization, polarization_conj, q_cov};
use crate::state::SystemState;
use crate::{Error, Result};

/// First line of every CSV artifact.
pub const CSV_SCHEMA: &str = "#schema=1";

#[derive(Debug, Parser)]
#[command(name = "covbracket", version, about = "Covariant Poisson brackets on a light-cone mode lattice")]
pub struct Cli {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config field, e.g. `--set constants.a=1`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Tabulate the lattice Pauli-Jordan function.
    PauliJordan(PauliJordanArgs),
    /// Elementary bracket table, or the bracket of two expressions.
    BracketTable(BracketTableArgs),
    /// Residuals of the four-bracket reduction chain.
    Reduce,
    /// Compare the Pauli-Jordan function at x and at Λx.
    BoostCheck(BoostCheckArgs),
    /// Integrate the particle (and field) and write the trajectory.
    Evolve(EvolveArgs),
    /// Bracket matrix of particle coordinates evolved in proper time, against the metric.
    SymplecticCheck,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run suites concurrently.
    #[arg(long)]
    pub parallel: bool,
    /// Restrict to these suites (overrides the config).
    #[arg(long = "suite", value_enum)]
    pub suites: Vec<SuiteArg>,
    /// Print the JSON report instead of one line per check.
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    Brackets,
    GuptaBleuler,
    PauliJordan,
    Dynamics,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Brackets => Suite::Brackets,
            SuiteArg::GuptaBleuler => Suite::GuptaBleuler,
            SuiteArg::PauliJordan => Suite::PauliJordan,
            SuiteArg::Dynamics => Suite::Dynamics,
        }
    }
}

#[derive(Debug, Args)]
pub struct PauliJordanArgs {
    /// Also evaluate on the lattice with n_max doubled at fixed cutoff.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableKind {
    Amp,
    Qpi,
}

#[derive(Debug, Args)]
pub struct BracketTableArgs {
    #[arg(long, value_enum, default_value = "amp")]
    pub kind: TableKind,
    /// Restrict to one mode.
    #[arg(long)]
    pub mode: Option<usize>,
    /// First expression; together with `--b` prints their joint bracket.
    #[arg(long, requires = "b")]
    pub a: Option<String>,
    #[arg(long, requires = "a")]
    pub b: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoostCheckArgs {
    #[arg(long, default_value = "z")]
    pub axis: Axis,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub rapidity: f64,
    /// Event as `t,x,y,z`.
    #[arg(long, default_value = "1,0.3,0.2,0.1", allow_negative_numbers = true)]
    pub x: String,
    /// Repeat at fixed cutoff with n_max, 2n_max and 4n_max.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Include the symplectic-check matrix in the summary.
    #[arg(long)]
    pub symplectic: bool,
}

/// Parse arguments and run; returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    let cfg = match RunConfig::from_path(cli.config.as_deref(), &cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(&cfg, a),
        Command::PauliJordan(a) => cmd_pauli_jordan(&cfg, a.refine),
        Command::BracketTable(a) => cmd_bracket_table(&cfg, a),
        Command::Reduce => cmd_reduce(&cfg),
        Command::BoostCheck(a) => cmd_boost_check(&cfg, a),
        Command::Evolve(a) => cmd_evolve(&cfg, a.symplectic || cfg.dynamics.symplectic),
        Command::SymplecticCheck => cmd_symplectic_check(&cfg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for usage and configuration problems, 1 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

/// Write a line to stdout; a closed pipe ends output quietly.
fn emit(line: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

/// CSV writer whose file starts with the schema comment.
fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let mut f = File::create(path)?;
    writeln!(f, "{CSV_SCHEMA}")?;
    Ok(csv::Writer::from_writer(f))
}

pub fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<i32> {
    let mut cfg = cfg.clone();
    if !args.suites.is_empty() {
        cfg.suites = args.suites.iter().map(|&s| s.into()).collect();
    }
    let report = run_verify(&cfg, args.parallel);
    write_json(&out_dir(&cfg)?.join("report.json"), &report)?;
    if args.json {
        print_json(&report)?;
    } else {
        for c in &report.checks {
            emit(&format!(
                "{} {:<14} {:<52} value={:<12.3e} tol={:.0e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.value,
                c.tolerance
            ))?;
        }
        emit(&format!("{} passed, {} failed", report.passed, report.failed))?;
    }
    Ok(if report.all_pass { 0 } else { 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PauliJordanRow {
    pub x0: f64,
    pub r: f64,
    pub delta_lat: f64,
    pub d0_delta_lat: f64,
}

fn linspace(range: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![range[0]];
    }
    (0..n)
        .map(|i| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `Δ_lat` and `∂₀Δ_lat` over the configured `(x⁰, r)` grid.
pub fn pauli_jordan_table(p: &PauliJordanParams, lattice: &ModeLattice) -> Vec<PauliJordanRow> {
    let norm = p.direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    let dir = p.direction.map(|v| v / norm);
    let mut rows = Vec::new();
    for x0 in linspace(p.x0_range, p.points[0]) {
        for r in linspace(p.r_range, p.points[1]) {
            let x = FourVector::from_parts(x0, dir.map(|d| d * r));
            rows.push(PauliJordanRow {
                x0,
                r,
                delta_lat: pauli_jordan_lattice(&x, lattice),
                d0_delta_lat: pauli_jordan_grad(&x, lattice)[0],
            });
        }
    }
    rows
}

#[derive(Debug, Serialize)]
struct PauliJordanSummary {
    rows: usize,
    n_modes: usize,
    csv: PathBuf,
    refined_csv: Option<PathBuf>,
    max_row_change: Option<f64>,
}

pub fn cmd_pauli_jordan(cfg: &RunConfig, refine: bool) -> Result<i32> {
    let lat = cfg.build_lattice()?;
    let dir = out_dir(cfg)?;
    let write = |name: &str, rows: &[PauliJordanRow]| -> Result<PathBuf> {
        let path = dir.join(name);
        let mut w = csv_writer(&path)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(path)
    };
    let rows = pauli_jordan_table(&cfg.pauli_jordan, &lat);
    let csv = write("pauli_jordan.csv", &rows)?;
    let mut summary = PauliJordanSummary {
        rows: rows.len(),
        n_modes: lat.len(),
        csv,
        refined_csv: None,
        max_row_change: None,
    };
    if refine {
        let fine = build_lattice(lat.delta_k / 2.0, lat.n_max * 2)?;
        let fine_rows = pauli_jordan_table(&cfg.pauli_jordan, &fine);
        summary.refined_csv = Some(write("pauli_jordan_refined.csv", &fine_rows)?);
        summary.max_row_change = Some(
            rows.iter()
                .zip(&fine_rows)
                .map(|(a, b)| (a.delta_lat - b.delta_lat).abs().max((a.d0_delta_lat - b.d0_delta_lat).abs()))
                .fold(0.0, f64::max),
        );
    }
    print_json(&summary)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct AmpRow {
    mode: usize,
    mu: usize,
    nu: usize,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct QpiRow {
    mode: usize,
    mu: usize,
    lambda: usize,
    nu: usize,
    re: f64,
    im: f64,
}

fn field_state(cfg: &RunConfig) -> Result<SystemState> {
    let lat = cfg.build_lattice()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let f = FieldState::random(lat, cfg.constants.c, cfg.constants.a, 1.0, &mut rng);
    Ok(SystemState::field_only(f))
}

pub fn cmd_bracket_table(cfg: &RunConfig, args: &BracketTableArgs) -> Result<i32> {
    let state = field_state(cfg)?;
    let lat = state.lattice().clone();
    let bcfg = BracketConfig::new(cfg.constants.a, cfg.constants.c, lat.clone())?;
    if let (Some(a), Some(b)) = (&args.a, &args.b) {
        let (pa, pb) = (parse(a)?, parse(b)?);
        let r: BracketReport = bracket_joint(&pa, &pb, &state, &bcfg)?;
        print_json(&r)?;
        return Ok(0);
    }
    let modes: Vec<usize> = match args.mode {
        Some(j) => {
            lat.mode(j).map_err(|e| Error::Config(e.to_string()))?;
            vec![j]
        }
        None => (0..lat.len()).collect(),
    };
    let path = out_dir(cfg)?.join("bracket_table.csv");
    let mut w = csv_writer(&path)?;
    let at = FourVector::ZERO;
    for &j in &modes {
        for mu in 0..4 {
            match args.kind {
                TableKind::Amp => {
                    let ga = amp_cov(j, mu).gradient(&state)?;
                    for nu in 0..4 {
                        let v = amp_from_gradients(&ga, &amp_conj_cov(j, nu).gradient(&state)?, &bcfg)?.0;
                        w.serialize(AmpRow { mode: j, mu, nu, re: v.re, im: v.im })?;
                    }
                }
                TableKind::Qpi => {
                    let gq = q_cov(&lat, bcfg.c, &at, j, mu).gradient(&state)?;
                    for lambda in 0..4 {
                        for nu in 0..4 {
                            let gp = pi(&lat, bcfg.c, &at, j, lambda, nu).gradient(&state)?;
                            let v = qpi_from_gradients(&gq, &gp, &bcfg)?.value;
                            w.serialize(QpiRow {
                                mode: j,
                                mu,
                                lambda,
                                nu,
                                re: v.re,
                                im: v.im,
                            })?;
                        }
                    }
                }
            }
        }
    }
    w.flush()?;
    drop(w);
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(0)
}

#[derive(Debug, Serialize)]
struct LabelledChain {
    label: String,
    #[serde(flatten)]
    chain: ReductionChain,
}

#[derive(Debug, Serialize)]
struct ReduceReport {
    chains: Vec<LabelledChain>,
    max_amp_vs_polarized: f64,
    max_polarized_vs_reduced: f64,
    max_reduced_vs_standard: f64,
}

pub fn cmd_reduce(cfg: &RunConfig) -> Result<i32> {
    let state = field_state(cfg)?;
    let lat = state.lattice().clone();
    let bcfg = BracketConfig::new(cfg.constants.a, cfg.constants.c, lat.clone())?;
    let mut chains = Vec::new();
    for j in 0..lat.len() {
        for lam in 1..3 {
            let chain = reduction_chain(&polarization(&lat, j, lam), &polarization_conj(&lat, j, lam), &state, &bcfg)?;
            chains.push(LabelledChain {
                label: format!("pair mode={j} polarization={lam}"),
                chain,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let obs = compatible_observables(&lat, &mut rng, 10);
    for (i, pair) in obs.chunks_exact(2).enumerate() {
        chains.push(LabelledChain {
            label: format!("random compatible pair {i}"),
            chain: reduction_chain(&pair[0], &pair[1], &state, &bcfg)?,
        });
    }
    let max = |f: fn(&ReductionChain) -> f64| chains.iter().map(|c| f(&c.chain)).fold(0.0, f64::max);
    let report = ReduceReport {
        max_amp_vs_polarized: max(|c| c.amp_vs_polarized),
        max_polarized_vs_reduced: max(|c| c.polarized_vs_reduced),
        max_reduced_vs_standard: max(|c| c.reduced_vs_standard),
        chains,
    };
    write_json(&out_dir(cfg)?.join("reduce.json"), &report)?;
    print_json(&report)?;
    Ok(0)
}

fn parse_event(s: &str) -> Result<FourVector> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Config(format!("bad event `{s}`: {e}")))?;
    let arr: [f64; 4] = v
        .try_into()
        .map_err(|_| Error::Config(format!("event `{s}` needs four components")))?;
    Ok(FourVector(arr))
}

#[derive(Debug, Serialize)]
struct BoostReport {
    x: [f64; 4],
    mapped: [f64; 4],
    #[serde(flatten)]
    check: BoostInvariance,
    refinement: Option<Vec<RefinementRow>>,
}

pub fn cmd_boost_check(cfg: &RunConfig, args: &BoostCheckArgs) -> Result<i32> {
    let lat = cfg.build_lattice()?;
    let x = parse_event(&args.x)?;
    let map = LorentzMap::boost(args.axis, args.rapidity);
    let check = boost_invariance_check(&x, &map, &lat)?;
    let refinement = if args.refine {
        let n = lat.n_max;
        Some(refinement_study(&x, &map, lat.delta_k * n as f64, &[n, 2 * n, 4 * n])?)
    } else {
        None
    };
    let report = BoostReport {
        x: x.0,
        mapped: map.apply(&x).0,
        check,
        refinement,
    };
    write_json(&out_dir(cfg)?.join("boost_check.json"), &report)?;
    print_json(&report)?;
    Ok(0)
}

/// Initial joint state described by the dynamics section of the config.
pub fn initial_state(cfg: &RunConfig) -> Result<SystemState> {
    let lat = cfg.build_lattice()?;
    let (a, c) = (cfg.constants.a, cfg.constants.c);
    let d = &cfg.dynamics;
    let field = if d.field_scale > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        FieldState::random(lat, c, a, d.field_scale, &mut rng)
    } else {
        FieldState::zero(lat, c, a)
    };
    let mut particle = d.particle(c);
    if d.coupling == crate::dynamics::Coupling::Coupled {
        // keep the kinetic momentum on shell in the total initial potential
        let af = field.reconstruct_potential(&particle.x);
        particle.p = particle.p - af * (particle.e / c);
    }
    particle.validate()?;
    Ok(SystemState::new(particle, field, 0.0))
}

#[derive(Debug, Serialize)]
pub struct EvolveSummary {
    pub steps: usize,
    pub dt: f64,
    pub final_x: [f64; 4],
    pub final_p: [f64; 4],
    pub max_mass_shell_drift: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub final_field_energy_proxy: f64,
    pub csv: PathBuf,
    pub symplectic: Option<SymplecticReport>,
}

#[derive(Serialize)]
struct CsvRow {
    t: f64,
    x0: f64,
    x1: f64,
    x2: f64,
    x3: f64,
    p0: f64,
    p1: f64,
    p2: f64,
    p3: f64,
    mass_shell_residual: f64,
    field_energy_proxy: f64,
}

impl From<&TrajectoryRow> for CsvRow {
    fn from(r: &TrajectoryRow) -> Self {
        CsvRow {
            t: r.t,
            x0: r.x[0],
            x1: r.x[1],
            x2: r.x[2],
            x3: r.x[3],
            p0: r.p[0],
            p1: r.p[1],
            p2: r.p[2],
            p3: r.p[3],
            mass_shell_residual: r.mass_shell_residual,
            field_energy_proxy: r.field_energy_proxy,
        }
    }
}

/// The bracket matrix is taken at fixed proper time, whatever clock the
/// trajectory itself uses.
fn symplectic_evolution(cfg: &RunConfig) -> EvolutionConfig {
    EvolutionConfig {
        clock: Clock::Proper,
        ..cfg.dynamics.evolution()
    }
}

fn tangent_options(cfg: &RunConfig) -> TangentOptions {
    TangentOptions {
        h: cfg.dynamics.fd_step,
        ..TangentOptions::default()
    }
}

pub fn cmd_evolve(cfg: &RunConfig, symplectic: bool) -> Result<i32> {
    let state = initial_state(cfg)?;
    let ecfg = cfg.dynamics.evolution();
    let ev = integrate(&state, &ecfg)?;
    let dir = out_dir(cfg)?;
    let csv = dir.join("trajectory.csv");
    let mut w = csv_writer(&csv)?;
    for r in &ev.rows {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    let symplectic = if symplectic {
        Some(symplectic_check(&state, &symplectic_evolution(cfg), &tangent_options(cfg))?)
    } else {
        None
    };
    let last = ev.rows.last().copied();
    let summary = EvolveSummary {
        steps: ecfg.steps,
        dt: ecfg.dt,
        final_x: ev.final_state.particle.x.0,
        final_p: ev.final_state.particle.p.0,
        max_mass_shell_drift: ev.max_mass_shell_drift(),
        initial_energy: total_energy(&state),
        final_energy: total_energy(&ev.final_state),
        final_field_energy_proxy: last.map(|r| r.field_energy_proxy).unwrap_or(0.0),
        csv,
        symplectic,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    print_json(&summary)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SymplecticOutput {
    #[serde(flatten)]
    report: SymplecticReport,
    metric: [[f64; 4]; 4],
    tolerance: f64,
    pass: bool,
}

pub fn cmd_symplectic_check(cfg: &RunConfig) -> Result<i32> {
    let state = initial_state(cfg)?;
    let report = symplectic_check(&state, &symplectic_evolution(cfg), &tangent_options(cfg))?;
    let tolerance = cfg.dynamics.symplectic_tolerance;
    let pass = report.deviation <= tolerance;
    let out = SymplecticOutput {
        report,
        metric: std::array::from_fn(|m| std::array::from_fn(|n| if m == n { eta(m) } else { 0.0 })),
        tolerance,
        pass,
    };
    write_json(&out_dir(cfg)?.join("symplectic.json"), &out)?;
    print_json(&out)?;
    Ok(if pass { 0 } else { 1 })
}
