//! Command-line front end: `tune`, `eval`, `bench` and `plot`.
//!
//! Exit codes: 0 success; 1 an output file could not be written or a bench
//! case failed; 2 invalid input; 3 closed loop unstable; 4 optimizer did not
//! converge and produced no stable result.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use plotters::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::{render_table, run_astrom_g3, run_table1};
use crate::error::Error;
use crate::lti::{closed_loop, PidGains, StabilityVerdict, TransferFunction};
use crate::metrics::{evaluate_closed_loop, MetricsReport};
use crate::optimizer::OptimOptions;
use crate::simulate::{ResponseTrace, TimeGrid, DEFAULT_DT, DEFAULT_HORIZON_MULT};
use crate::target::TargetSpec;
use crate::tuner::{tune, TuneReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sostiae", version, about = "PID tuning by second-order step-response target matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tune PID gains for a plant against a target response.
    Tune(TuneArgs),
    /// Evaluate given PID gains on a plant.
    Eval(EvalArgs),
    /// Reproduce the published comparison tables.
    Bench(BenchArgs),
    /// Render a trace CSV as an SVG step-response plot.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct PlantArgs {
    /// Plant numerator, descending powers, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    num: Vec<f64>,
    /// Plant denominator, descending powers, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    den: Vec<f64>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the time series (t,y_target,y_pid) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write a step-response plot as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TuneArgs {
    #[command(flatten)]
    plant: PlantArgs,
    /// Target 2% settling time in seconds.
    #[arg(long, requires = "po", conflicts_with = "trajectory", allow_negative_numbers = true)]
    ts: Option<f64>,
    /// Target percent overshoot, strictly between 0 and 100.
    #[arg(long, requires = "ts", allow_negative_numbers = true)]
    po: Option<f64>,
    /// Target trajectory CSV with columns t,y (header optional).
    #[arg(long, required_unless_present = "ts")]
    trajectory: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DT)]
    dt: f64,
    #[arg(long = "horizon-mult", default_value_t = DEFAULT_HORIZON_MULT)]
    horizon_mult: f64,
    /// Fix the derivative gain at zero.
    #[arg(long = "pi-only")]
    pi_only: bool,
    /// Maximum number of objective evaluations.
    #[arg(long, default_value_t = 3000)]
    budget: usize,
    #[arg(long = "kp-max")]
    kp_max: Option<f64>,
    #[arg(long = "ki-max")]
    ki_max: Option<f64>,
    #[arg(long = "kd-max")]
    kd_max: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    plant: PlantArgs,
    #[arg(long, allow_negative_numbers = true)]
    kp: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    ki: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    kd: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    dt: f64,
    /// Reference settling time defining the horizon (horizon-mult x ts).
    #[arg(long, default_value_t = 2.5)]
    ts: f64,
    #[arg(long = "horizon-mult", default_value_t = DEFAULT_HORIZON_MULT)]
    horizon_mult: f64,
    /// Explicit horizon in seconds; overrides ts x horizon-mult.
    #[arg(long)]
    horizon: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Table1,
    Astrom,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Write outcomes as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    svg: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Output(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn output_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output(format!("{}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// JSON report schema

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantJson {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecJson {
    SecondOrder { ts: f64, po: f64 },
    Trajectory { trajectory_file: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub dt: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainsJson {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneMetricsJson {
    pub settling_time: f64,
    pub overshoot_pct: f64,
    pub iae_unit_step: f64,
    pub iae_vs_target: f64,
    /// `null` when the closed-loop DC gain is not finite.
    pub final_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalMetricsJson {
    pub settling_time: f64,
    pub overshoot_pct: f64,
    pub iae_unit_step: f64,
    pub final_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub stable: bool,
    pub marginal: bool,
    pub poles: Vec<PoleJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerJson {
    pub evals: usize,
    pub objective: f64,
    pub converged: bool,
}

/// Report written by `tune --out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneReportJson {
    pub plant: PlantJson,
    pub spec: SpecJson,
    pub grid: GridJson,
    pub gains: GainsJson,
    pub metrics: TuneMetricsJson,
    pub stability: StabilityJson,
    pub optimizer: OptimizerJson,
}

/// Report written by `eval --out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReportJson {
    pub plant: PlantJson,
    pub grid: GridJson,
    pub gains: GainsJson,
    pub metrics: EvalMetricsJson,
    pub stability: StabilityJson,
}

fn plant_json(tf: &TransferFunction) -> PlantJson {
    PlantJson { num: tf.num().coeffs().to_vec(), den: tf.den().coeffs().to_vec() }
}

fn grid_json(g: &TimeGrid) -> GridJson {
    GridJson { dt: g.dt, n_points: g.n_points }
}

fn gains_json(g: &PidGains) -> GainsJson {
    GainsJson { kp: g.kp, ki: g.ki, kd: g.kd }
}

fn stability_json(v: &StabilityVerdict) -> StabilityJson {
    StabilityJson {
        stable: v.stable,
        marginal: v.marginal,
        poles: v.poles.iter().map(|p| PoleJson { re: p.re, im: p.im }).collect(),
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl TuneReportJson {
    pub fn from_report(r: &TuneReport, trajectory_file: Option<&Path>) -> Self {
        let spec = match (&r.spec, trajectory_file) {
            (TargetSpec::SecondOrder { ts, po }, _) => SpecJson::SecondOrder { ts: *ts, po: *po },
            (TargetSpec::Trajectory { .. }, path) => SpecJson::Trajectory {
                trajectory_file: path.map(|p| p.display().to_string()).unwrap_or_default(),
            },
        };
        TuneReportJson {
            plant: plant_json(&r.plant),
            spec,
            grid: grid_json(&r.grid),
            gains: gains_json(&r.gains),
            metrics: TuneMetricsJson {
                settling_time: r.metrics.settling_time,
                overshoot_pct: r.metrics.overshoot_pct,
                iae_unit_step: r.metrics.iae_unit_step,
                iae_vs_target: r.iae_vs_target,
                final_value: finite(r.metrics.final_value),
            },
            stability: stability_json(&r.stability),
            optimizer: OptimizerJson {
                evals: r.optimizer.evals,
                objective: r.optimizer.objective,
                converged: r.optimizer.converged,
            },
        }
    }
}

impl EvalReportJson {
    fn new(plant: &TransferFunction, grid: &TimeGrid, g: &PidGains, m: &MetricsReport, v: &StabilityVerdict) -> Self {
        EvalReportJson {
            plant: plant_json(plant),
            grid: grid_json(grid),
            gains: gains_json(g),
            metrics: EvalMetricsJson {
                settling_time: m.settling_time,
                overshoot_pct: m.overshoot_pct,
                iae_unit_step: m.iae_unit_step,
                final_value: finite(m.final_value),
            },
            stability: stability_json(v),
        }
    }
}

// ---------------------------------------------------------------------------
// Files

/// Reads a `t,y` CSV; a non-numeric first row is taken as a header.
pub fn read_trajectory(path: &Path) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let (mut t, mut y) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        if rec.len() != 2 {
            return Err(format!("{}: line {}: expected 2 columns t,y", path.display(), i + 1));
        }
        let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
        match parsed {
            (Ok(a), Ok(b)) => {
                t.push(a);
                y.push(b);
            }
            _ if i == 0 => continue,
            _ => return Err(format!("{}: line {}: not a number", path.display(), i + 1)),
        }
    }
    Ok((t, y))
}

/// Trace rows `(t, y_target, y_pid)`.
pub type TraceRow = (f64, f64, f64);

fn trace_rows(target: &ResponseTrace, pid: &ResponseTrace) -> Vec<TraceRow> {
    pid.grid
        .times()
        .zip(target.y.iter().zip(&pid.y))
        .map(|(t, (a, b))| (t, *a, *b))
        .collect()
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<(), String> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    w.write_record(["t", "y_target", "y_pid"]).map_err(|e| e.to_string())?;
    for &(t, a, b) in rows {
        w.serialize((t, a, b)).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>, String> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "y_target", "y_pid"] {
        return Err(format!("{}: expected header t,y_target,y_pid", path.display()));
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e| format!("{}: {e}", path.display())))
        .collect()
}

/// Step-response plot of the target and closed-loop traces.
pub fn render_svg(path: &Path, rows: &[TraceRow]) -> Result<(), String> {
    if rows.is_empty() {
        return Err("no samples to plot".into());
    }
    let t_end = rows.last().map(|r| r.0).unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let (lo, hi) = rows
        .iter()
        .flat_map(|r| [r.1, r.2])
        .fold((0.0f64, 1.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let pad = 0.05 * (hi - lo);

    let root = SVGBackend::new(path, (800, 500)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| e.to_string())?;
    let mut chart = ChartBuilder::on(&root)
        .margin(20)
        .x_label_area_size(40)
        .y_label_area_size(50)
        .caption("Step response", ("sans-serif", 20))
        .build_cartesian_2d(0.0..t_end, (lo - pad)..(hi + pad))
        .map_err(|e| e.to_string())?;
    chart
        .configure_mesh()
        .x_desc("t [s]")
        .y_desc("y")
        .draw()
        .map_err(|e| e.to_string())?;
    chart
        .draw_series(LineSeries::new(rows.iter().map(|r| (r.0, r.1)), &BLUE))
        .map_err(|e| e.to_string())?
        .label("target")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], BLUE));
    chart
        .draw_series(LineSeries::new(rows.iter().map(|r| (r.0, r.2)), &RED))
        .map_err(|e| e.to_string())?
        .label("PID closed loop")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], RED));
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| e.to_string())?;
    root.present().map_err(|e| e.to_string())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| output_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| output_err(path, e))
}

fn write_outputs(o: &OutputArgs, rows: &[TraceRow]) -> Result<(), CliError> {
    if let Some(p) = &o.csv {
        write_trace_csv(p, rows).map_err(CliError::Output)?;
    }
    if let Some(p) = &o.svg {
        render_svg(p, rows).map_err(CliError::Output)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Commands

fn plant(args: &PlantArgs) -> Result<TransferFunction, CliError> {
    Ok(TransferFunction::from_coeffs(&args.num, &args.den)?)
}

fn print_metrics(out: &mut dyn Write, m: &MetricsReport, stability: &StabilityVerdict) -> io::Result<()> {
    let settle = if m.settled { String::new() } else { " (not settled)".into() };
    writeln!(out, "settling time   {:.4} s{settle}", m.settling_time)?;
    writeln!(out, "overshoot       {:.4} %", m.overshoot_pct)?;
    writeln!(out, "IAE (unit step) {:.4}", m.iae_unit_step)?;
    writeln!(
        out,
        "stable          {} (max Re pole {:.4}{})",
        stability.stable,
        stability.max_real_part,
        if stability.marginal { ", marginal" } else { "" }
    )
}

fn cmd_tune(a: &TuneArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let plant = plant(&a.plant)?;
    let spec = match (a.ts, a.po, &a.trajectory) {
        (Some(ts), Some(po), None) => TargetSpec::second_order(ts, po)?,
        (None, None, Some(path)) => {
            let (raw_t, raw_y) = read_trajectory(path).map_err(CliError::Input)?;
            TargetSpec::Trajectory { raw_t, raw_y }
        }
        _ => return Err(CliError::Input("give either --ts and --po, or --trajectory".into())),
    };
    spec.validate()?;
    let grid = match spec {
        TargetSpec::SecondOrder { .. } => spec.default_grid(a.dt, a.horizon_mult)?,
        TargetSpec::Trajectory { .. } => spec.default_grid(a.dt, 1.0)?,
    };
    for (name, cap) in [("kp-max", a.kp_max), ("ki-max", a.ki_max), ("kd-max", a.kd_max)] {
        if let Some(c) = cap {
            if c.is_nan() || c < 0.0 {
                return Err(CliError::Input(format!("--{name} must be non-negative, got {c}")));
            }
        }
    }
    let opts = OptimOptions { max_evals: a.budget, pi_only: a.pi_only, ..Default::default() }
        .with_caps(a.kp_max, a.ki_max, a.kd_max);
    let report = tune(&plant, &spec, &opts, Some(grid))?;

    let g = report.gains;
    writeln!(out, "gains           kp={:.4} ki={:.4} kd={:.4}", g.kp, g.ki, g.kd).ok();
    print_metrics(out, &report.metrics, &report.stability).ok();
    writeln!(out, "IAE (target)    {:.4}", report.iae_vs_target).ok();
    writeln!(
        out,
        "optimizer       {} evaluations, objective {:.4}, {}",
        report.optimizer.evals,
        report.optimizer.objective,
        if report.optimizer.converged { "converged" } else { "not converged" }
    )
    .ok();

    let t = closed_loop(&plant, &g)?;
    let (_, y) = evaluate_closed_loop(&t, &grid)?;
    write_outputs(&a.output, &trace_rows(&report.target.trace, &y))?;
    if let Some(p) = &a.output.out {
        write_json(p, &TuneReportJson::from_report(&report, a.trajectory.as_deref()))?;
    }

    Ok(if report.successful() {
        EXIT_OK
    } else if !report.optimizer.converged {
        EXIT_NOT_CONVERGED
    } else {
        EXIT_UNSTABLE
    })
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let plant = plant(&a.plant)?;
    let gains = PidGains::new(a.kp, a.ki, a.kd)?;
    let horizon = match a.horizon {
        Some(h) => h,
        None => {
            if !(a.ts > 0.0 && a.ts.is_finite()) {
                return Err(CliError::Input(format!("--ts must be positive, got {}", a.ts)));
            }
            a.horizon_mult * a.ts
        }
    };
    let grid = TimeGrid::spanning(a.dt, horizon)?;
    let t = closed_loop(&plant, &gains)?;
    let (metrics, y) = evaluate_closed_loop(&t, &grid)?;
    let stability = crate::lti::is_stable(&t)?;

    writeln!(out, "gains           kp={:.4} ki={:.4} kd={:.4}", gains.kp, gains.ki, gains.kd).ok();
    print_metrics(out, &metrics, &stability).ok();

    // eval has no target; the unit-step reference stands in for it
    let reference = ResponseTrace::constant(grid, 1.0);
    write_outputs(&a.output, &trace_rows(&reference, &y))?;
    if let Some(p) = &a.output.out {
        write_json(p, &EvalReportJson::new(&plant, &grid, &gains, &metrics, &stability))?;
    }
    Ok(if stability.stable { EXIT_OK } else { EXIT_UNSTABLE })
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let outcomes = match a.suite {
        Suite::Table1 => run_table1(),
        Suite::Astrom => run_astrom_g3(),
    };
    write!(out, "{}", render_table(&outcomes)).ok();
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    writeln!(out, "{} of {} cases passed", outcomes.len() - failed, outcomes.len()).ok();
    if let Some(p) = &a.json {
        write_json(p, &outcomes)?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_plot(a: &PlotArgs) -> Result<i32, CliError> {
    let rows = read_trace_csv(&a.csv).map_err(CliError::Input)?;
    render_svg(&a.svg, &rows).map_err(CliError::Output)?;
    Ok(EXIT_OK)
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    write!(out, "{e}").ok();
                    EXIT_OK
                }
                _ => {
                    write!(err, "{}", e.render()).ok();
                    EXIT_INVALID_INPUT
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Tune(a) => cmd_tune(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            writeln!(err, "error: {msg}").ok();
            EXIT_INVALID_INPUT
        }
        Err(CliError::Output(msg)) => {
            writeln!(err, "error: {msg}").ok();
            EXIT_FAILURE
        }
    }
}

/// Entry point for the binary.
pub fn main_with_std_io() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
