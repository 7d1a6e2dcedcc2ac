//! CSV and JSON writers for maps, trajectories and sweep reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! values always produce equal bytes.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::evaluation::{Outcome, SweepReport};
use crate::planner::Trajectory;
use crate::radio::RewardMap;
use crate::scenario::GridSpec;
use crate::smoothing::SmoothTrajectory;
use crate::Scalar;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// `x_m,y_m,value`, one row per cell in index order.
pub fn write_reward_map<T: Scalar, W: Write>(rm: &RewardMap<T>, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["x_m", "y_m", "value"])?;
    for (cell, v) in rm.grid.cells().zip(&rm.values) {
        let p = rm.grid.center(cell);
        out.write_record([p.x.to_string(), p.y.to_string(), v.to_string()])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `x_m,y_m,sir_db`, one row per cell in index order.
pub fn write_sir_heatmap<T: Scalar, W: Write>(grid: &GridSpec<T>, sir_db: &[T], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["x_m", "y_m", "sir_db"])?;
    for (cell, v) in grid.cells().zip(sir_db) {
        let p = grid.center(cell);
        out.write_record([p.x.to_string(), p.y.to_string(), v.to_string()])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `i,t_s,x_m,y_m,action_label,v_mps,heading_rad,stage_reward`, one row per
/// waypoint. The final waypoint has no control, so its last four fields are
/// empty.
pub fn write_trajectory<T: Scalar, W: Write>(traj: &Trajectory<T>, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["i", "t_s", "x_m", "y_m", "action_label", "v_mps", "heading_rad", "stage_reward"])?;
    for (i, wp) in traj.waypoints.iter().enumerate() {
        let mut row = vec![i.to_string(), wp.t_s.to_string(), wp.position.x.to_string(), wp.position.y.to_string()];
        match traj.controls.get(i) {
            Some(a) => row.extend([
                a.label().to_string(),
                a.speed_mps::<T>().to_string(),
                a.heading_rad::<T>().to_string(),
                traj.stage_rewards[i].to_string(),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        out.write_record(&row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `t_s,x_m,y_m`, one row per sample.
pub fn write_smooth_trajectory<T: Scalar, W: Write>(st: &SmoothTrajectory<T>, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["t_s", "x_m", "y_m"])?;
    for s in &st.samples {
        out.write_record([s.t_s.to_string(), s.position.x.to_string(), s.position.y.to_string()])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const SWEEP_HEADER: [&str; 16] = [
    "row",
    "variant",
    "criterion",
    "t_s",
    "n_mbs",
    "seed",
    "status",
    "seeds",
    "per_ue_capacity",
    "per_ue_capacity_std",
    "outage_probability",
    "outage_probability_std",
    "total_objective",
    "stay_count",
    "max_speed_mps",
    "detail",
];

/// Per-seed rows (`row = run`) followed by seed-averaged rows (`row = mean`).
pub fn write_sweep<T: Scalar, W: Write>(report: &SweepReport<T>, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER)?;
    let crit = |c: Option<crate::radio::Criterion>| c.map_or("none", |c| c.as_str()).to_string();
    for r in &report.records {
        let mut row = vec![
            "run".to_string(),
            r.variant.to_string(),
            crit(r.criterion),
            r.total_time_s.to_string(),
            r.n_mbs.to_string(),
            r.seed.to_string(),
        ];
        match &r.outcome {
            Outcome::Done {
                metrics,
                stay_count,
                max_speed_mps,
            } => row.extend([
                "ok".to_string(),
                "1".to_string(),
                metrics.per_ue_capacity.to_string(),
                String::new(),
                metrics.outage_probability.to_string(),
                String::new(),
                metrics.total_objective.to_string(),
                stay_count.to_string(),
                max_speed_mps.to_string(),
                String::new(),
            ]),
            Outcome::Infeasible { distance, steps } => {
                row.extend(["infeasible".to_string(), "0".to_string()]);
                row.extend(std::iter::repeat_n(String::new(), 7));
                row.push(format!("chebyshev {distance} > steps {steps}"));
            }
        }
        out.write_record(&row)?;
    }
    for a in &report.aggregates {
        let status = if a.seeds == 0 { "infeasible" } else { "ok" };
        let num = |v: T| if a.seeds == 0 { String::new() } else { v.to_string() };
        out.write_record([
            "mean".to_string(),
            a.variant.to_string(),
            crit(a.criterion),
            a.total_time_s.to_string(),
            a.n_mbs.to_string(),
            String::new(),
            status.to_string(),
            a.seeds.to_string(),
            num(a.mean_capacity),
            num(a.std_capacity),
            num(a.mean_outage),
            num(a.std_outage),
            num(a.mean_objective),
            String::new(),
            String::new(),
            if a.infeasible > 0 { format!("{} infeasible seeds", a.infeasible) } else { String::new() },
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize)]
struct SummaryAggregate {
    variant: String,
    criterion: String,
    t_s: f64,
    n_mbs: usize,
    seeds: usize,
    infeasible: usize,
    per_ue_capacity: Option<f64>,
    per_ue_capacity_std: Option<f64>,
    outage_probability: Option<f64>,
    outage_probability_std: Option<f64>,
    total_objective: Option<f64>,
}

#[derive(Serialize)]
struct Summary<'a> {
    note: &'a str,
    outage_threshold_bps_hz: f64,
    samples_per_interval: usize,
    seeds: &'a [u64],
    n_mbs: &'a [usize],
    n_ue: usize,
    total_times_s: &'a [f64],
    aggregates: Vec<SummaryAggregate>,
}

/// Seed-averaged metrics as pretty-printed JSON.
pub fn write_sweep_summary<T: Scalar, W: Write>(report: &SweepReport<T>, w: W) -> Result<()> {
    let opt = |seeds: usize, v: T| (seeds > 0).then(|| v.as_f64());
    let summary = Summary {
        note: "paired design: every criterion and duration reuses the same network per seed; \
               base stations are nested across n_mbs values",
        outage_threshold_bps_hz: report.threshold.as_f64(),
        samples_per_interval: report.samples_per_interval,
        seeds: &report.config.seeds,
        n_mbs: &report.config.n_mbs,
        n_ue: report.config.n_ue,
        total_times_s: &report.config.total_times_s,
        aggregates: report
            .aggregates
            .iter()
            .map(|a| SummaryAggregate {
                variant: a.variant.to_string(),
                criterion: a.criterion.map_or("none".into(), |c| c.to_string()),
                t_s: a.total_time_s.as_f64(),
                n_mbs: a.n_mbs,
                seeds: a.seeds,
                infeasible: a.infeasible,
                per_ue_capacity: opt(a.seeds, a.mean_capacity),
                per_ue_capacity_std: opt(a.seeds, a.std_capacity),
                outage_probability: opt(a.seeds, a.mean_outage),
                outage_probability_std: opt(a.seeds, a.std_outage),
                total_objective: opt(a.seeds, a.mean_objective),
            })
            .collect(),
    };
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, &summary)?;
    w.write_all(b"\n").map_err(|e| crate::Error::io("<summary>", e))?;
    Ok(())
}
