//! Command-line front end. Four subcommands cover the toolkit's surface:
//! `check-exponents` validates one tuple from flags, `enumerate` writes the
//! passing tuples on a rational grid as CSV, `experiment` runs one configured
//! ratio experiment, and `solve` integrates and exports a single trajectory.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage/config error.
//! Every run is fully determined by its config file and the seeds inside it;
//! the only environment input is `STRICHECK_THREADS`, which sizes the worker
//! pool and never changes results.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use stricheck_core::divfree::{self, DivFreeGenerator};
use stricheck_core::evolution::{schrodinger_solve, wave_solve, Forcing, TimeGrid, WaveData};
use stricheck_core::exec;
use stricheck_core::experiments::{bump_samples, run_experiment, ExperimentConfig, FamilyConfig, TupleConfig};
use stricheck_core::exponents::{
    check, enumerate_exponents, format_rational, EnumerationSpec, ExponentTuple, Rational, TheoremTag,
};
use stricheck_core::field::VectorField;
use stricheck_core::grid::Grid;
use stricheck_core::io;
use stricheck_core::{Error, Result};

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

/// Seed roles for the solve command, matching the experiment trials: the
/// exported trajectory is exactly trial 0 of the configured family.
const ROLE_U0: u64 = 101;
const ROLE_U1: u64 = 102;
const ROLE_FORCING: u64 = 103;
const ROLE_MAP_BASE: u64 = 200;

#[derive(Parser)]
#[command(
    name = "stricheck",
    version,
    about = "Exponent checkers, tuple enumeration, and desk-scale ratio experiments for dispersive estimates with divergence-free data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one exponent tuple and print its violations, if any.
    CheckExponents(CheckArgs),
    /// Write every passing tuple on a bounded-denominator grid as CSV.
    Enumerate(EnumerateArgs),
    /// Run one configured experiment; write report files and a run manifest.
    Experiment(RunArgs),
    /// Integrate one configured trajectory and export its frames.
    Solve(RunArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// One of: wave-system, schrodinger, inhomo-wave3d, wente, wente-wave, taggart.
    #[arg(long)]
    theorem: String,
    /// Space dimension.
    #[arg(long)]
    n: u32,
    /// Lebesgue exponents as exact rationals ("8", "7/2") or "inf".
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    qt: Option<String>,
    #[arg(long)]
    rt: Option<String>,
    /// Regularity indices as exact rationals ("5/8", "-1/2", "0.625").
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// One of: wave-system, schrodinger, inhomo-wave3d, wente, wente-wave, taggart.
    #[arg(long)]
    theorem: String,
    /// Space dimension.
    #[arg(long)]
    n: u32,
    /// Largest denominator of the rational exponent grid.
    #[arg(long, default_value_t = 8)]
    max_denominator: i64,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; one file fully determines the run.
    #[arg(value_name = "CONFIG")]
    config: PathBuf,
    /// Directory that receives one subdirectory per run.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; only real usage
            // errors print to stderr and carry the usage exit code.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads_from_env() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::CheckExponents(a) => cmd_check(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Solve(a) => cmd_solve(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// `STRICHECK_THREADS` sizes the worker pool; it is the only environment
/// variable the tool reads, and it never affects results.
fn configure_threads_from_env() -> Result<()> {
    let Some(raw) = std::env::var_os("STRICHECK_THREADS") else {
        return Ok(());
    };
    let raw = raw
        .into_string()
        .map_err(|_| Error::Config("STRICHECK_THREADS is not valid UTF-8".into()))?;
    match raw.trim().parse::<usize>() {
        Ok(n) if n >= 1 => exec::configure_threads(n),
        _ => Err(Error::Config(format!(
            "STRICHECK_THREADS must be a positive integer, got {raw:?}"
        ))),
    }
}

fn cmd_check(a: &CheckArgs) -> Result<i32> {
    let tuple = TupleConfig {
        theorem: a.theorem.clone(),
        q: a.q.clone(),
        r: a.r.clone(),
        qt: a.qt.clone(),
        rt: a.rt.clone(),
        s: a.s.clone(),
        k: a.k.clone(),
        gamma: a.gamma.clone(),
    }
    .to_tuple(a.n)?;
    let result = check(&tuple)?;
    if result.pass() {
        println!("pass {tuple}");
        Ok(EXIT_OK)
    } else {
        println!("fail {tuple}");
        for v in &result.violations {
            println!("  {v}");
        }
        Ok(EXIT_FAIL)
    }
}

fn opt_exp(e: Option<stricheck_core::exponents::Exponent>) -> String {
    e.map(|e| e.to_string()).unwrap_or_default()
}

fn opt_rat(r: Option<Rational>) -> String {
    r.map(format_rational).unwrap_or_default()
}

fn tuple_csv_row(t: &ExponentTuple) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}\n",
        t.theorem,
        t.n,
        opt_exp(t.q),
        opt_exp(t.r),
        opt_exp(t.qt),
        opt_exp(t.rt),
        opt_rat(t.s),
        opt_rat(t.k),
        opt_rat(t.gamma),
    )
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<i32> {
    let theorem: TheoremTag = a.theorem.parse()?;
    let spec = EnumerationSpec {
        theorem,
        n: a.n,
        max_denominator: a.max_denominator,
    };
    let tuples = enumerate_exponents(&spec)?;
    let mut text = String::from("theorem,n,q,r,qt,rt,s,k,gamma\n");
    for t in &tuples {
        text.push_str(&tuple_csv_row(t));
    }
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} tuples for {} n={} max denominator {}",
        tuples.len(),
        theorem,
        a.n,
        a.max_denominator
    );
    Ok(EXIT_OK)
}

/// Reproducibility record written next to every run's outputs.
#[derive(Serialize)]
struct RunManifest {
    tool_version: &'static str,
    command: &'static str,
    name: String,
    config_digest: String,
    wall_seconds: f64,
    /// Output files, relative to this manifest's directory.
    outputs: Vec<String>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    refinement_stable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scaling_spread: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monotone: Option<bool>,
}

fn write_run_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    fs::write(dir.join("run_manifest.json"), serde_json::to_string_pretty(manifest)?)?;
    Ok(())
}

fn cmd_experiment(a: &RunArgs) -> Result<i32> {
    let cfg = ExperimentConfig::from_path(&a.config)?;
    let digest = cfg.digest();
    let start = Instant::now();
    let report = run_experiment(&cfg)?;
    let dir = a.out.join(format!("{}-{}", cfg.experiment.name(), &digest[..8]));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("report.json"), report.to_json()?)?;
    fs::write(dir.join("report.csv"), report.to_csv())?;
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "experiment",
        name: cfg.experiment.name().to_string(),
        config_digest: digest,
        wall_seconds: start.elapsed().as_secs_f64(),
        outputs: vec!["report.json".into(), "report.csv".into()],
        pass: report.pass,
        refinement_stable: report.refinement_stable,
        scaling_spread: report.scaling_spread,
        monotone: report.monotone,
    };
    write_run_manifest(&dir, &manifest)?;
    println!(
        "{} {} -> {}",
        manifest.name,
        if report.pass { "pass" } else { "fail" },
        dir.display()
    );
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

/// Single-trajectory run: equation, grid, time window, and data family.
/// The family's `trials` count is ignored; the exported trajectory is the
/// family's first trial.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    equation: Equation,
    /// Spatial dimension.
    n: usize,
    grid_points: usize,
    #[serde(default = "default_period")]
    period: f64,
    t_end: f64,
    steps: usize,
    /// Frame export stride; defaults to steps/64, at least 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_stride: Option<usize>,
    family: FamilyConfig,
    /// Also draw a forcing field and apply it under a smooth time bump
    /// supported on (t_end/16, 9·t_end/16); free evolution otherwise.
    #[serde(default)]
    forced: bool,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Equation {
    Wave,
    Schrodinger,
}

impl Equation {
    fn name(&self) -> &'static str {
        match self {
            Equation::Wave => "wave",
            Equation::Schrodinger => "schrodinger",
        }
    }
}

fn default_period() -> f64 {
    std::f64::consts::TAU
}

fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Draws the `role`-th canonical field of trial 0 of the family. Divergence
/// -free kinds go through the shared generator; the unconstrained map kind
/// draws one canonical scalar per component.
fn family_field(fam: &FamilyConfig, grid: Grid, role: u64) -> Result<VectorField> {
    let trial_seed = divfree::mix_seed(fam.seed, 0);
    match fam.kind.divfree_kind() {
        Some(kind) => {
            DivFreeGenerator::new(kind, divfree::mix_seed(trial_seed, role), fam.beta, fam.cutoff).generate(grid)
        }
        None => {
            let comps = (0..grid.dim())
                .map(|j| {
                    divfree::random_scalar(
                        grid,
                        divfree::mix_seed(divfree::mix_seed(trial_seed, role), ROLE_MAP_BASE + j as u64),
                        fam.beta,
                        fam.cutoff,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            VectorField::new(comps)
        }
    }
}

fn cmd_solve(a: &RunArgs) -> Result<i32> {
    let cfg: SolveConfig = serde_json::from_str(&fs::read_to_string(&a.config)?)?;
    let digest = sha256_hex(&serde_json::to_string(&cfg)?);
    let stride = cfg.output_stride.unwrap_or_else(|| (cfg.steps / 64).max(1));
    if stride == 0 || cfg.steps % stride != 0 {
        return Err(Error::Config(format!(
            "output stride {stride} must be positive and divide steps {}",
            cfg.steps
        )));
    }
    let grid = Grid::new(cfg.n, cfg.grid_points, cfg.period)?;
    let times = TimeGrid::new(cfg.t_end, cfg.steps)?;
    let start = Instant::now();

    let forcing_fields;
    let profiles;
    let forcing = if cfg.forced {
        forcing_fields = [family_field(&cfg.family, grid, ROLE_FORCING)?];
        profiles = [bump_samples(&times, cfg.t_end / 16.0, cfg.t_end * 9.0 / 16.0)];
        Forcing::Separable {
            fields: &forcing_fields,
            profiles: &profiles,
        }
    } else {
        Forcing::Zero
    };

    let dir = a.out.join(format!("solve-{}-{}", cfg.equation.name(), &digest[..8]));
    fs::create_dir_all(&dir)?;
    let manifest = match cfg.equation {
        Equation::Wave => {
            let data = WaveData::new(
                family_field(&cfg.family, grid, ROLE_U0)?,
                family_field(&cfg.family, grid, ROLE_U1)?,
            )?;
            let traj = wave_solve(&data, &forcing, &times, stride)?;
            io::export_trajectory(&dir, &traj.u, Some(&traj.ut))?
        }
        Equation::Schrodinger => {
            let q0 = family_field(&cfg.family, grid, ROLE_U0)?;
            let sol = schrodinger_solve(&q0, &forcing, &times, stride)?;
            io::export_trajectory(&dir, &sol, None)?
        }
    };

    let mut outputs = vec!["manifest.json".to_string()];
    outputs.extend(manifest.frames.iter().cloned());
    if let Some(v) = &manifest.velocity_frames {
        outputs.extend(v.iter().cloned());
    }
    let run = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        command: "solve",
        name: format!("solve-{}", cfg.equation.name()),
        config_digest: digest,
        wall_seconds: start.elapsed().as_secs_f64(),
        outputs,
        pass: true,
        refinement_stable: None,
        scaling_spread: None,
        monotone: None,
    };
    write_run_manifest(&dir, &run)?;
    println!(
        "solve-{} {} frames -> {}",
        cfg.equation.name(),
        manifest.frames.len(),
        dir.display()
    );
    Ok(EXIT_OK)
}
