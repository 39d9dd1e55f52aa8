use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use eocloak::analytic::{annulus_condition, confocal_condition, CloakDesign, Orientation};
use eocloak::config::RunConfig;
use eocloak::exterior::{export_grid, solve_all, Window};
use eocloak::metrics::{cloak_errors, SamplingSet, UnitSystem};
use eocloak::optimizer::{run_optimization, SlipSource};
use eocloak::validation::{self, Level};
use eocloak::CloakError;
use serde::Serialize;

mod manifest;

use manifest::RunManifest;

pub const GRID_CSV: &str = "grid.csv";
pub const GRID_JSON: &str = "grid.json";
pub const SUMMARY_JSON: &str = "summary.json";
pub const REPORT_JSON: &str = "report.json";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(CloakError),
    #[error("numerical failure: {0}")]
    Numerical(CloakError),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("validation failed: {0} of {1} checks failed")]
    Validation(usize, usize),
}

impl CliError {
    fn output(e: impl std::fmt::Display) -> Self {
        CliError::Output(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Validation(..) => 4,
        }
    }
}

impl From<CloakError> for CliError {
    fn from(e: CloakError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Config(e)
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "eocloak", version, about = "Electric and hydrodynamic cloak design in Hele-Shaw cells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form cloak parameters for concentric disks or confocal ellipses.
    Condition(ConditionArgs),
    /// Forward solve with given materials; writes a field grid and error summary.
    Solve(SolveArgs),
    /// Choose the shell permittivity and zeta potential for a general geometry.
    Optimize(OptimizeArgs),
    /// Run the built-in check suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ConditionArgs {
    /// Radii of the core, object and slip boundary.
    #[arg(long, num_args = 3, value_names = ["R_O", "R_I", "R_E"], conflicts_with = "confocal", required_unless_present = "confocal")]
    annulus: Option<Vec<f64>>,
    /// Elliptic radii of the core, object and slip boundary.
    #[arg(long, num_args = 3, value_names = ["XI_O", "XI_I", "XI_E"])]
    confocal: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value = "x")]
    orientation: Orientation,
    /// JSON file of laboratory scales.
    #[arg(long)]
    units: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["NX", "NY"], default_values_t = [201, 201])]
    res: Vec<usize>,
    /// Node count for every curve.
    #[arg(long = "N")]
    nodes: Option<usize>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "N")]
    nodes: Option<usize>,
    #[arg(long)]
    slip_source: Option<SlipSource>,
    /// Adds dimensional values to the printed summary.
    #[arg(long)]
    units: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value = "fast")]
    level: Level,
}

#[derive(Debug, Serialize)]
struct ConditionOutput {
    eps_ratio: f64,
    zeta0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_s_dimensional: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta_dimensional: Option<f64>,
}

fn load_units(path: &Path) -> Result<UnitSystem, CliError> {
    let bad =
        |e: &dyn std::fmt::Display| CliError::Config(CloakError::InvalidParameter(format!("{}: {e}", path.display())));
    let text = std::fs::read_to_string(path).map_err(|e| bad(&e))?;
    let units: UnitSystem = serde_json::from_str(&text).map_err(|e| bad(&e))?;
    Ok(units.validate()?)
}

fn load_config(path: &Path, nodes: Option<usize>) -> Result<RunConfig, CliError> {
    let cfg = RunConfig::from_path(path)
        .map_err(|e| CliError::Config(CloakError::InvalidParameter(format!("{}: {e}", path.display()))))?;
    Ok(match nodes {
        Some(n) => cfg.with_nodes(n),
        None => cfg,
    })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::output)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(CliError::output)?;
    serde_json::to_writer_pretty(BufWriter::new(file), value).map_err(CliError::output)
}

fn cmd_condition(args: ConditionArgs) -> Result<(), CliError> {
    let design: CloakDesign = match (&args.annulus, &args.confocal) {
        (Some(r), _) => annulus_condition(r[0], r[1], r[2], args.n)?,
        (_, Some(xi)) => confocal_condition(xi[0], xi[1], xi[2], args.n, args.orientation)?,
        _ => unreachable!("clap requires one geometry"),
    };
    let units = args.units.as_deref().map(load_units).transpose()?;
    let out = ConditionOutput {
        eps_ratio: design.eps_ratio,
        zeta0: design.zeta0,
        eps_s_dimensional: units.map(|u| design.eps_ratio * u.permittivity),
        zeta_dimensional: units.map(|u| -u.zeta_char() * design.zeta0),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&out).map_err(CliError::output)?);
        return Ok(());
    }
    println!("eps_s/eps_m {:.4}", out.eps_ratio);
    println!("zeta0 {:.4}", out.zeta0);
    if let (Some(eps), Some(zeta)) = (out.eps_s_dimensional, out.zeta_dimensional) {
        println!("eps_s {eps:.4e} F/m");
        println!("zeta {zeta:.4} V");
    }
    Ok(())
}

fn default_window(cfg: &eocloak::config::RunConfig) -> Result<Window, CliError> {
    let region = cfg.forward()?.region.clone();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in region.nodes() {
        lo = lo.min(p.x.min(p.y));
        hi = hi.max(p.x.max(p.y));
    }
    let pad = 0.5 * (hi - lo);
    Ok(Window { x0: lo - pad, x1: hi + pad, y0: lo - pad, y1: hi + pad })
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let raw = load_config(&args.config, args.nodes)?;
    let resolved = raw.resolved()?;
    let mut manifest = RunManifest::new("solve", resolved.clone())?;
    let window = match args.window.as_deref() {
        Some(&[x0, x1, y0, y1]) => Window { x0, x1, y0, y1 },
        _ => default_window(&resolved)?,
    };
    let (nx, ny) = (args.res[0], args.res[1]);

    let start = Instant::now();
    let cfg = resolved.forward()?;
    let (esol, psol) = solve_all(&cfg)?;
    manifest.time("solve", start.elapsed().as_secs_f64());

    let start = Instant::now();
    let grid = export_grid(&cfg, &esol, &psol, window, nx, ny)?;
    let sampling = SamplingSet::annulus(&cfg, &resolved.sampling.unwrap_or_default())?;
    let summary = cloak_errors(&cfg, &esol, &psol, &sampling)?;
    manifest.time("sample", start.elapsed().as_secs_f64());

    create_dir(&args.out)?;
    let csv = File::create(args.out.join(GRID_CSV)).map_err(CliError::output)?;
    grid.write_csv(BufWriter::new(csv))?;
    manifest.record(GRID_CSV);
    let json = File::create(args.out.join(GRID_JSON)).map_err(CliError::output)?;
    grid.write_json(BufWriter::new(json))?;
    manifest.record(GRID_JSON);
    write_json(&args.out.join(SUMMARY_JSON), &summary)?;
    manifest.record(SUMMARY_JSON);
    manifest.write(&args.out)?;

    println!("max |phi - H| {:.3e}", summary.e_max_phi);
    println!("max |p - P| {:.3e}", summary.e_max_p);
    println!("grid max |p - P| {:.3e}", grid.max_exterior_pressure_error());
    Ok(())
}

fn cmd_optimize(args: OptimizeArgs) -> Result<(), CliError> {
    let mut raw = load_config(&args.config, args.nodes)?;
    if let Some(slip) = args.slip_source {
        raw = raw.with_slip_source(slip);
    }
    let units = args.units.as_deref().map(load_units).transpose()?;
    let resolved = raw.resolved()?;
    let mut manifest = RunManifest::new("optimize", resolved.clone())?;

    let start = Instant::now();
    let design = resolved.design()?;
    let report = run_optimization(&design, &resolved.optimize_options()?)?;
    manifest.time("optimize", start.elapsed().as_secs_f64());

    create_dir(&args.out)?;
    write_json(&args.out.join(REPORT_JSON), &report)?;
    manifest.record(REPORT_JSON);
    manifest.write(&args.out)?;

    println!("eps_s/eps_m {:.6} ({:?})", report.eps_ratio, report.permittivity.bound);
    println!("zeta0 {:.6} ({:?})", report.zeta0_opt, report.zeta.optimum.bound);
    println!("G {:.3e}  F {:.3e}", report.cost_g, report.cost_f);
    if let Some(u) = units {
        println!("eps_s {:.4e} F/m", report.eps_ratio * u.permittivity);
        println!("zeta {:.4} V", -u.zeta_char() * report.zeta0_opt);
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let report = validation::run(args.level);
    for check in &report.checks {
        println!("{}", check.line());
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{}/{} passed", report.checks.len() - failed, report.checks.len());
    if failed > 0 {
        return Err(CliError::Validation(failed, report.checks.len()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Condition(a) => cmd_condition(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
