//! Command implementations behind the `uavdp` binary.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use uavdp::export::{
    write_reward_map, write_sir_heatmap, write_smooth_trajectory, write_sweep, write_sweep_summary, write_trajectory,
};
use uavdp::radio::sir_heatmap_db;
use uavdp::{
    baseline_metrics, evaluate_discrete, evaluate_smooth, load_scenario, max_ground_speed, plan, reward_map, run_sweep,
    smooth_trajectory, Criterion, Scenario,
};

/// Environment variable consulted when `--workers` is not given.
pub const WORKERS_ENV: &str = "UAVDP_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "uavdp", version, about = "UAV trajectory planning over a cellular network")]
pub struct Cli {
    /// Worker threads for parallel sections; results do not depend on it.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the per-cell reward map and the terrestrial SIR heatmap.
    Heatmap(HeatmapArgs),
    /// Plan the optimal trajectory for one criterion.
    Plan(PlanArgs),
    /// Run the Monte-Carlo sweep described in the config.
    Sweep(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Write into a non-empty output directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "pf")]
    pub criterion: Criterion,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value = "pf")]
    pub criterion: Criterion,
    /// Also write the Bezier-smoothed trajectory.
    #[arg(long)]
    pub smooth: bool,
    /// Curve samples per DP interval; defaults to the config value.
    #[arg(long, value_name = "N")]
    pub samples_per_interval: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(uavdp::Error),
    #[error("{0}")]
    Infeasible(uavdp::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<uavdp::Error> for CliError {
    fn from(e: uavdp::Error) -> Self {
        match e {
            uavdp::Error::Infeasible { .. } => CliError::Infeasible(e),
            uavdp::Error::Io { .. } | uavdp::Error::Csv(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Record of one command invocation, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: PathBuf,
    pub seeds: Vec<u64>,
    pub tool_version: &'static str,
    pub outputs: Vec<String>,
    pub wall_clock_s: f64,
}

struct OutDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutDir {
    fn prepare(root: &Path, force: bool) -> Result<Self, CliError> {
        if root.exists() {
            let mut entries = fs::read_dir(root).map_err(|e| io_err(root, e))?;
            if entries.next().is_some() && !force {
                return Err(CliError::Io(format!(
                    "{}: output directory is not empty (use --force to overwrite)",
                    root.display()
                )));
            }
        }
        fs::create_dir_all(root).map_err(|e| io_err(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write<F>(&mut self, name: &str, f: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<fs::File>) -> uavdp::Result<()>,
    {
        let path = self.root.join(name);
        let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        std::io::Write::flush(&mut w).map_err(|e| io_err(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<(), CliError> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            std::io::Write::write_all(w, b"\n").map_err(|e| uavdp::Error::Io {
                path: name.into(),
                source: e,
            })
        })
    }

    /// Writes `manifest.json` via a temporary file and rename.
    fn finish(self, command: &str, config: &Path, seeds: Vec<u64>, started: Instant) -> Result<Vec<String>, CliError> {
        let manifest = RunManifest {
            command: command.to_string(),
            config: config.to_path_buf(),
            seeds,
            tool_version: env!("CARGO_PKG_VERSION"),
            outputs: self.files.clone(),
            wall_clock_s: started.elapsed().as_secs_f64(),
        };
        let tmp = self.root.join(".manifest.json.tmp");
        let dst = self.root.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| io_err(&tmp, e))?;
        fs::write(&tmp, text + "\n").map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &dst).map_err(|e| io_err(&dst, e))?;
        Ok(self.files)
    }
}

fn scenario_seeds(s: &Scenario<f64>) -> Vec<u64> {
    s.network.seed.into_iter().collect()
}

pub fn cmd_heatmap(args: &HeatmapArgs) -> Result<Vec<String>, CliError> {
    let started = Instant::now();
    let s: Scenario<f64> = load_scenario(&args.common.config)?;
    let mut out = OutDir::prepare(&args.common.out, args.common.force)?;
    let rm = reward_map(&s.network, &s.grid, args.criterion);
    out.write(&format!("reward_{}.csv", args.criterion), |w| write_reward_map(&rm, w))?;
    let sir = sir_heatmap_db(&s.network, &s.grid);
    out.write("sir_heatmap.csv", |w| write_sir_heatmap(&s.grid, &sir, w))?;
    out.finish("heatmap", &args.common.config, scenario_seeds(&s), started)
}

#[derive(Serialize)]
struct PlanReport {
    criterion: Criterion,
    steps: usize,
    total_reward: f64,
    stay_count: usize,
    max_step_speed_mps: f64,
    mbs_coefficients: uavdp::PathLossCoefficients<f64>,
    uav_coefficients: uavdp::PathLossCoefficients<f64>,
    discrete: Option<uavdp::MetricsF64>,
    smooth: Option<uavdp::MetricsF64>,
    smooth_max_ground_speed_mps: Option<f64>,
    baseline: Option<uavdp::MetricsF64>,
}

pub fn cmd_plan(args: &PlanArgs) -> Result<Vec<String>, CliError> {
    let started = Instant::now();
    let s: Scenario<f64> = load_scenario(&args.common.config)?;
    let spi = args.samples_per_interval.unwrap_or_else(|| s.samples_per_interval());
    if spi == 0 {
        return Err(CliError::Config(uavdp::Error::Domain(
            "--samples-per-interval must be at least 1".into(),
        )));
    }
    let rm = reward_map(&s.network, &s.grid, args.criterion);
    let traj = plan(&rm, &s.mission)?;
    let mut out = OutDir::prepare(&args.common.out, args.common.force)?;
    out.write(&format!("trajectory_{}.csv", args.criterion), |w| write_trajectory(&traj, w))?;

    let threshold = s.outage_threshold();
    let steps = traj.steps();
    let mut report = PlanReport {
        criterion: args.criterion,
        steps,
        total_reward: traj.total_reward,
        stay_count: traj.stay_count(),
        max_step_speed_mps: traj.max_step_m() / traj.delta_s,
        mbs_coefficients: *s.network.mbs_coefficients(),
        uav_coefficients: *s.network.uav_coefficients(),
        discrete: None,
        smooth: None,
        smooth_max_ground_speed_mps: None,
        baseline: None,
    };
    if steps > 0 {
        report.discrete = Some(evaluate_discrete(&s.network, &traj, threshold)?);
        report.baseline = Some(baseline_metrics(&s.network, args.criterion, threshold, steps)?);
        if args.smooth {
            let st = smooth_trajectory(&traj, spi)?;
            out.write(&format!("smooth_{}.csv", args.criterion), |w| write_smooth_trajectory(&st, w))?;
            report.smooth = Some(evaluate_smooth(&s.network, &st, threshold)?);
            report.smooth_max_ground_speed_mps = Some(max_ground_speed(&st));
        }
    }
    out.json(&format!("metrics_{}.json", args.criterion), &report)?;
    out.finish("plan", &args.common.config, scenario_seeds(&s), started)
}

pub fn cmd_sweep(args: &CommonArgs, workers: Option<usize>) -> Result<Vec<String>, CliError> {
    let started = Instant::now();
    let s: Scenario<f64> = load_scenario(&args.config)?;
    let mut out = OutDir::prepare(&args.out, args.force)?;
    let report = run_sweep(&s, workers)?;
    out.write("sweep.csv", |w| write_sweep(&report, w))?;
    out.write("summary.json", |w| write_sweep_summary(&report, w))?;
    out.finish("sweep", &args.config, report.config.seeds.clone(), started)
}

pub fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    match &cli.command {
        Command::Heatmap(a) => cmd_heatmap(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Sweep(a) => cmd_sweep(a, cli.workers),
    }
}
