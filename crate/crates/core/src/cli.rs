//! Command-line front end. The binary is a thin wrapper around [`run_cli`].
//!
//! Exit codes: 0 completed, 2 configuration error, 3 blow-up detected,
//! 4 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::experiments::{run_spatial_study, run_temporal_study, ConvergenceTable, ScenarioSpec};
use crate::io::{load_config, parse_config_with_overrides, write_snapshot, write_timeseries, RunConfig};
use crate::spectral::SpectralPlan;
use crate::stepper::{evolve, RunStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "strang-gpe", version, about = "Strang-splitting spectral solver for the 2D Gross-Pitaevskii equation")]
pub struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML run configuration; defaults are used when omitted.
    #[arg(short, long)]
    pub config: Option<PathBuf>,

    /// Override any config key, e.g. `--set nonlinearity.kappa=-1.9718`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Output directory (overrides `output.directory`).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one configuration, writing diagnostics and snapshots.
    Run(CommonArgs),
    /// Spatial self-convergence study at a fixed time step.
    ConvergeSpace {
        #[command(flatten)]
        common: CommonArgs,
        /// Halving list of mesh sizes, e.g. `1/4,1/8,1/16`.
        #[arg(long, value_delimiter = ',', default_value = "1/4,1/8,1/16,1/32")]
        resolutions: Vec<String>,
        /// Time step (defaults to `evolution.dt`).
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Temporal self-convergence study on a fixed grid.
    ConvergeTime {
        #[command(flatten)]
        common: CommonArgs,
        /// Halving list of time steps.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.005,0.0025,0.00125,0.000625")]
        resolutions: Vec<String>,
        /// Mesh size (defaults to the config grid spacing).
        #[arg(long)]
        h: Option<String>,
    },
    /// Print the resolved configuration and derived quantities.
    Describe(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Run(c) | Command::Describe(c) => c,
            Command::ConvergeSpace { common, .. } | Command::ConvergeTime { common, .. } => common,
        }
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> i32 {
    let cfg = match resolve_config(cli.command.common()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let result = match &cli.command {
        Command::Run(_) => cmd_run(&cfg),
        Command::ConvergeSpace { resolutions, dt, .. } => {
            cmd_converge_space(&cfg, resolutions, *dt)
        }
        Command::ConvergeTime { resolutions, h, .. } => cmd_converge_time(&cfg, resolutions, h.as_deref()),
        Command::Describe(_) => cmd_describe(&cfg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn resolve_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path, &common.overrides).map_err(|e| match e {
            Error::Io { path, source } => Error::config(
                "<config file>",
                format!("cannot read {}: {source}", path.display()),
            ),
            other => other,
        })?,
        None => parse_config_with_overrides("", &common.overrides)?,
    };
    if let Some(out) = &common.out {
        cfg.output.directory = out.clone();
    }
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
struct RunSummary {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    blowup_time: Option<f64>,
    steps_taken: usize,
    t_end: f64,
    mass_initial: f64,
    mass_final: f64,
    mass_drift: f64,
    energy_initial: f64,
    energy_final: f64,
    energy_drift: f64,
    max_density_peak: f64,
}

fn relative_drift(first: f64, last: f64) -> f64 {
    if first == 0.0 {
        (last - first).abs()
    } else {
        ((last - first) / first).abs()
    }
}

fn summarize(records: &[DiagnosticsRecord], status: RunStatus, steps_taken: usize, t_end: f64) -> RunSummary {
    let first = records[0];
    let last = records
        .iter()
        .rev()
        .find(|r| r.finite)
        .copied()
        .unwrap_or(first);
    RunSummary {
        status: match status {
            RunStatus::Completed => "completed".into(),
            RunStatus::BlownUp { .. } => "blown-up".into(),
        },
        blowup_time: match status {
            RunStatus::BlownUp { at_time } => Some(at_time),
            RunStatus::Completed => None,
        },
        steps_taken,
        t_end,
        mass_initial: first.mass,
        mass_final: last.mass,
        mass_drift: relative_drift(first.mass, last.mass),
        energy_initial: first.energy,
        energy_final: last.energy,
        energy_drift: relative_drift(first.energy, last.energy),
        max_density_peak: records.iter().map(|r| r.max_density).fold(0.0, f64::max),
    }
}

/// Runs one evolution: `timeseries.csv`, `snapshot_t<time>.gpe2` files and
/// `summary.toml` in the output directory.
pub fn cmd_run(cfg: &RunConfig) -> Result<i32> {
    let grid = cfg.grid_spec()?;
    let model_spec = cfg.model_spec();
    let model = model_spec.prepare(&grid)?;
    let f0 = model_spec.initial.sample(&grid)?;
    let spec = cfg.evolution_spec()?;
    let detector = cfg.detector()?;
    let plan = SpectralPlan::new(grid).with_dealias(cfg.grid.dealias);

    let dir = &cfg.output.directory;
    create_dir(dir)?;
    info!("running {} steps on {}x{} nodes", spec.steps(), grid.nx(), grid.ny());

    let mut snapshot_error = None;
    let run = evolve(&f0, &model, &plan, &spec, &detector, |obs| {
        if obs.snapshot && cfg.output.snapshots && snapshot_error.is_none() {
            let path = dir.join(format!("snapshot_t{:.6}.gpe2", obs.t));
            if let Err(e) = write_snapshot(obs.field, &path) {
                snapshot_error = Some(e);
            }
        }
    })?;
    if let Some(e) = snapshot_error {
        return Err(e);
    }
    if cfg.output.timeseries {
        write_timeseries(&run.diagnostics, &dir.join("timeseries.csv"))?;
    }
    let summary = summarize(&run.diagnostics, run.status, run.steps_taken, run.time);
    let text = toml::to_string(&summary).expect("summary serializes");
    write_text(&dir.join("summary.toml"), &text)?;
    print!("{text}");
    Ok(match run.status {
        RunStatus::Completed => EXIT_OK,
        RunStatus::BlownUp { at_time } => {
            eprintln!("blow-up detected at t = {at_time}");
            EXIT_BLOWUP
        }
    })
}

fn scenario_from(cfg: &RunConfig) -> ScenarioSpec {
    let g = &cfg.grid;
    ScenarioSpec {
        label: match cfg.potential.kind {
            crate::io::PotentialKind::Zero => "0".into(),
            crate::io::PotentialKind::Quadratic => format!(
                "({}x^2{:+}y^2)/(2*{})",
                cfg.potential.cx, cfg.potential.cy, cfg.potential.eps
            ),
        },
        bounds: (g.a, g.b, g.c, g.d),
        model: cfg.model_spec(),
        t_final: cfg.evolution.t_final,
        scheme: cfg.evolution.scheme,
    }
}

/// Accepts `1/8` as well as plain decimals.
pub fn parse_resolution(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let n: f64 = num.trim().parse().map_err(|_| Error::config("resolutions", format!("bad value `{text}`")))?;
            let d: f64 = den.trim().parse().map_err(|_| Error::config("resolutions", format!("bad value `{text}`")))?;
            n / d
        }
        None => text
            .parse()
            .map_err(|_| Error::config("resolutions", format!("bad value `{text}`")))?,
    };
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::config("resolutions", format!("`{text}` must be positive")));
    }
    Ok(value)
}

fn emit_table(cfg: &RunConfig, table: &ConvergenceTable, stem: &str) -> Result<i32> {
    let dir = &cfg.output.directory;
    create_dir(dir)?;
    write_text(&dir.join(format!("{stem}.csv")), &table.to_csv())?;
    let text = table.to_text();
    write_text(&dir.join(format!("{stem}.txt")), &text)?;
    print!("{text}");
    match table.fitted_order {
        Some(p) => println!("fitted order: {p:.4}"),
        None => println!("fitted order: n/a"),
    }
    Ok(if table.is_complete() { EXIT_OK } else { EXIT_BLOWUP })
}

pub fn cmd_converge_space(cfg: &RunConfig, resolutions: &[String], dt: Option<f64>) -> Result<i32> {
    let h_list = resolutions
        .iter()
        .map(|r| parse_resolution(r))
        .collect::<Result<Vec<_>>>()?;
    let dt = dt.unwrap_or(cfg.evolution.dt);
    let table = run_spatial_study(&scenario_from(cfg), &h_list, dt)?;
    emit_table(cfg, &table, "convergence_space")
}

pub fn cmd_converge_time(cfg: &RunConfig, resolutions: &[String], h: Option<&str>) -> Result<i32> {
    let dt_list = resolutions
        .iter()
        .map(|r| parse_resolution(r))
        .collect::<Result<Vec<_>>>()?;
    let h = match h {
        Some(h) => parse_resolution(h)?,
        None => cfg.grid_spec()?.dx(),
    };
    let table = run_temporal_study(&scenario_from(cfg), &dt_list, h)?;
    emit_table(cfg, &table, "convergence_time")
}

/// Bytes per node held during an evolution: field, backup, transpose buffer
/// and phase table (16 B each) plus potential and `|k|^2` (8 B each).
const BYTES_PER_NODE: usize = 4 * 16 + 2 * 8;

pub fn describe(cfg: &RunConfig) -> Result<String> {
    let grid = cfg.grid_spec()?;
    let spec = cfg.evolution_spec()?;
    let mut out = cfg.to_toml();
    let nodes = grid.len();
    let _ = writeln!(out, "\n# derived");
    let _ = writeln!(out, "# dx = {}", grid.dx());
    let _ = writeln!(out, "# dy = {}", grid.dy());
    let _ = writeln!(out, "# steps N = {}", spec.steps());
    let _ = writeln!(out, "# nodes = {nodes}");
    let _ = writeln!(
        out,
        "# estimated memory = {:.1} MiB",
        (nodes * BYTES_PER_NODE) as f64 / (1024.0 * 1024.0)
    );
    Ok(out)
}

pub fn cmd_describe(cfg: &RunConfig) -> Result<i32> {
    print!("{}", describe(cfg)?);
    Ok(EXIT_OK)
}
