//! Capacity and outage metrics, and Monte-Carlo sweeps over seeds,
//! mission durations and base-station counts.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::planner::plan;
use crate::radio::{objective_value, reward_map, Criterion, LinkBudget};
use crate::scenario::{generate_network, MissionConfig, NetworkRealization, Scenario};
use crate::smoothing::{max_ground_speed, smooth_trajectory, SmoothTrajectory};
use crate::planner::Trajectory;
use crate::Scalar;

/// Rate below which a UE counts as in outage, bps/Hz.
pub const DEFAULT_OUTAGE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryMetrics<T> {
    /// Mean over evaluated instants of the mean UE rate, bps/Hz.
    pub per_ue_capacity: T,
    /// Fraction of (UE, instant) pairs below `threshold`.
    pub outage_probability: T,
    /// Objective accumulated over the mission, in units of one interval.
    pub total_objective: T,
    pub threshold: T,
    /// Number of UAV positions evaluated.
    pub instants: usize,
}

/// Evaluates the network with the UAV at each position in turn; every
/// position carries the same time weight and contributes `weight` to the
/// objective integral.
fn evaluate_positions<T: Scalar>(
    net: &NetworkRealization<T>,
    positions: &[Option<Point2<T>>],
    criterion: Criterion,
    threshold: T,
    weight: T,
) -> Result<TrajectoryMetrics<T>> {
    if positions.is_empty() {
        return Err(Error::Domain("no UAV positions to evaluate".into()));
    }
    if let Some(p) = positions.iter().flatten().find(|p| !net.area.contains(**p)) {
        return Err(Error::Domain(format!("UAV position ({}, {}) lies outside the area", p.x, p.y)));
    }
    let budget = LinkBudget::new(net);
    let k = T::of_usize(net.n_ue());
    let mut capacity = T::zero();
    let mut outages = 0usize;
    let mut objective = T::zero();
    for p in positions {
        let r = budget.rates(*p);
        capacity = capacity + r.rates.iter().fold(T::zero(), |a, x| a + *x) / k;
        outages += r.rates.iter().filter(|x| **x < threshold).count();
        objective = objective + objective_value(&r, criterion) * weight;
    }
    let n = T::of_usize(positions.len());
    Ok(TrajectoryMetrics {
        per_ue_capacity: capacity / n,
        outage_probability: T::of_usize(outages) / (n * k),
        total_objective: objective,
        threshold,
        instants: positions.len(),
    })
}

/// Metrics with the UAV at waypoints `0 .. N-1`, one per interval.
pub fn evaluate_discrete<T: Scalar>(
    net: &NetworkRealization<T>,
    traj: &Trajectory<T>,
    threshold: T,
) -> Result<TrajectoryMetrics<T>> {
    let n = traj.steps();
    let positions: Vec<_> = traj.waypoints[..n].iter().map(|w| Some(w.position)).collect();
    evaluate_positions(net, &positions, traj.criterion, threshold, T::one())
}

/// Metrics over every sample of the smoothed curve except the one at `t = T`,
/// so the evaluated instants cover `[0, T)` like [`evaluate_discrete`].
pub fn evaluate_smooth<T: Scalar>(
    net: &NetworkRealization<T>,
    st: &SmoothTrajectory<T>,
    threshold: T,
) -> Result<TrajectoryMetrics<T>> {
    let positions: Vec<_> = st.samples[..st.samples.len().saturating_sub(1)]
        .iter()
        .map(|s| Some(s.position))
        .collect();
    let weight = T::one() / T::of_usize(st.samples_per_interval);
    evaluate_positions(net, &positions, st.criterion, threshold, weight)
}

/// Reference metrics of the terrestrial network alone over `n_steps` intervals.
pub fn baseline_metrics<T: Scalar>(
    net: &NetworkRealization<T>,
    criterion: Criterion,
    threshold: T,
    n_steps: usize,
) -> Result<TrajectoryMetrics<T>> {
    evaluate_positions(net, &vec![None; n_steps], criterion, threshold, T::one())
}

fn default_seeds() -> Vec<u64> {
    (1..=20).collect()
}

/// Sweep section of a scenario file. Area, grid, radio, mission endpoints and
/// evaluation settings come from the rest of the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub seeds: Vec<u64>,
    pub n_mbs: Vec<usize>,
    pub n_ue: usize,
    pub total_times_s: Vec<f64>,
    pub criteria: Vec<Criterion>,
    /// Also evaluate the Bezier-smoothed version of every trajectory.
    pub smooth: bool,
    /// Also evaluate the network without a UAV.
    pub baseline: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seeds: default_seeds(),
            n_mbs: vec![4, 5, 6],
            n_ue: 100,
            total_times_s: vec![160.0, 200.0, 240.0, 280.0, 320.0, 360.0],
            criteria: Criterion::ALL.to_vec(),
            smooth: true,
            baseline: true,
        }
    }
}

impl SweepConfig {
    pub(crate) fn validate(&self, mission: &MissionConfig) -> Result<()> {
        let nonempty = |ok: bool, field: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::config(field, "must not be empty"))
            }
        };
        nonempty(!self.seeds.is_empty(), "sweep.seeds")?;
        nonempty(!self.n_mbs.is_empty(), "sweep.n_mbs")?;
        nonempty(!self.total_times_s.is_empty(), "sweep.total_times_s")?;
        nonempty(!self.criteria.is_empty(), "sweep.criteria")?;
        if self.n_mbs.contains(&0) {
            return Err(Error::config("sweep.n_mbs", "counts must be at least 1"));
        }
        if self.n_ue == 0 {
            return Err(Error::config("sweep.n_ue", "must be at least 1"));
        }
        for t in &self.total_times_s {
            let q = t / mission.delta_s;
            if !(t.is_finite() && *t >= 0.0 && (q - q.round()).abs() <= 1e-9 * q.max(1.0)) {
                return Err(Error::config(
                    "sweep.total_times_s",
                    format!("{t} s is not a whole multiple of delta_s = {} s", mission.delta_s),
                ));
            }
        }
        Ok(())
    }
}

/// What a sweep row measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Discrete,
    Smooth,
    Baseline,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Discrete => "discrete",
            Variant::Smooth => "smooth",
            Variant::Baseline => "baseline",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome<T> {
    Done {
        metrics: TrajectoryMetrics<T>,
        /// Number of hover intervals in the discrete plan.
        stay_count: usize,
        /// Fastest ground speed along the evaluated path, m/s.
        max_speed_mps: T,
    },
    Infeasible { distance: usize, steps: usize },
}

/// One (variant, criterion, T, n_mbs, seed) result. Baseline rows carry no
/// criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord<T> {
    pub variant: Variant,
    pub criterion: Option<Criterion>,
    pub total_time_s: T,
    pub n_mbs: usize,
    pub seed: u64,
    pub outcome: Outcome<T>,
}

impl<T: Scalar> SweepRecord<T> {
    pub fn metrics(&self) -> Option<&TrajectoryMetrics<T>> {
        match &self.outcome {
            Outcome::Done { metrics, .. } => Some(metrics),
            Outcome::Infeasible { .. } => None,
        }
    }
}

/// Seed average for one (variant, criterion, T, n_mbs) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate<T> {
    pub variant: Variant,
    pub criterion: Option<Criterion>,
    pub total_time_s: T,
    pub n_mbs: usize,
    /// Seeds with a feasible mission.
    pub seeds: usize,
    pub infeasible: usize,
    pub mean_capacity: T,
    pub std_capacity: T,
    pub mean_outage: T,
    pub std_outage: T,
    pub mean_objective: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<T> {
    pub config: SweepConfig,
    pub threshold: T,
    pub samples_per_interval: usize,
    pub records: Vec<SweepRecord<T>>,
    pub aggregates: Vec<Aggregate<T>>,
}

impl<T: Scalar> SweepReport<T> {
    pub fn aggregate(
        &self,
        variant: Variant,
        criterion: Option<Criterion>,
        total_time_s: T,
        n_mbs: usize,
    ) -> Option<&Aggregate<T>> {
        self.aggregates.iter().find(|a| {
            a.variant == variant && a.criterion == criterion && a.total_time_s == total_time_s && a.n_mbs == n_mbs
        })
    }

    pub fn records_for(
        &self,
        variant: Variant,
        criterion: Option<Criterion>,
        total_time_s: T,
        n_mbs: usize,
    ) -> impl Iterator<Item = &SweepRecord<T>> + '_ {
        self.records.iter().filter(move |r| {
            r.variant == variant && r.criterion == criterion && r.total_time_s == total_time_s && r.n_mbs == n_mbs
        })
    }
}

fn mean_std<T: Scalar>(xs: &[T]) -> (T, T) {
    if xs.is_empty() {
        return (T::nan(), T::nan());
    }
    let n = T::of_usize(xs.len());
    let mean = xs.iter().fold(T::zero(), |a, x| a + *x) / n;
    let var = xs.iter().fold(T::zero(), |a, x| a + (*x - mean) * (*x - mean)) / n;
    (mean, var.sqrt())
}

/// All records for one network realization, in a fixed order.
fn run_unit<T: Scalar>(scenario: &Scenario<T>, seed: u64, n_mbs: usize) -> Result<Vec<SweepRecord<T>>> {
    let cfg = &scenario.config.sweep;
    let threshold = scenario.outage_threshold();
    let spi = scenario.samples_per_interval();
    let net = generate_network(seed, n_mbs, cfg.n_ue, &scenario.area, scenario.radio)?;
    let mut out = Vec::new();
    let record = |variant, criterion, total_time_s, outcome| SweepRecord {
        variant,
        criterion,
        total_time_s,
        n_mbs,
        seed,
        outcome,
    };

    let times: Vec<T> = cfg.total_times_s.iter().map(|t| T::of(*t)).collect();
    for &criterion in &cfg.criteria {
        let rm = reward_map(&net, &scenario.grid, criterion);
        for &t in &times {
            let mission = scenario.mission.with_total_time(t, &scenario.grid)?;
            let traj = match plan(&rm, &mission) {
                Ok(traj) => traj,
                Err(Error::Infeasible { distance, steps }) => {
                    let o = Outcome::Infeasible { distance, steps };
                    out.push(record(Variant::Discrete, Some(criterion), t, o));
                    if cfg.smooth {
                        out.push(record(Variant::Smooth, Some(criterion), t, o));
                    }
                    continue;
                }
                Err(e) => return Err(e),
            };
            if traj.steps() == 0 {
                return Err(Error::config("sweep.total_times_s", "zero-length missions cannot be evaluated"));
            }
            out.push(record(
                Variant::Discrete,
                Some(criterion),
                t,
                Outcome::Done {
                    metrics: evaluate_discrete(&net, &traj, threshold)?,
                    stay_count: traj.stay_count(),
                    max_speed_mps: traj.max_step_m() / traj.delta_s,
                },
            ));
            if cfg.smooth {
                let st = smooth_trajectory(&traj, spi)?;
                out.push(record(
                    Variant::Smooth,
                    Some(criterion),
                    t,
                    Outcome::Done {
                        metrics: evaluate_smooth(&net, &st, threshold)?,
                        stay_count: traj.stay_count(),
                        max_speed_mps: max_ground_speed(&st),
                    },
                ));
            }
        }
    }
    if cfg.baseline {
        for &t in &times {
            let steps = scenario.mission.with_total_time(t, &scenario.grid)?.steps().max(1);
            out.push(record(
                Variant::Baseline,
                None,
                t,
                Outcome::Done {
                    metrics: baseline_metrics(&net, Criterion::Pf, threshold, steps)?,
                    stay_count: 0,
                    max_speed_mps: T::zero(),
                },
            ));
        }
    }
    Ok(out)
}

/// Runs every (seed, n_mbs) realization against every criterion and mission
/// duration. Networks are shared across criteria and durations for a given
/// seed, and base stations are nested across `n_mbs` values, so comparisons
/// are paired.
///
/// `workers` bounds the thread count; the report does not depend on it.
pub fn run_sweep<T: Scalar>(scenario: &Scenario<T>, workers: Option<usize>) -> Result<SweepReport<T>> {
    let cfg = &scenario.config.sweep;
    let units: Vec<(usize, u64)> = cfg
        .n_mbs
        .iter()
        .flat_map(|m| cfg.seeds.iter().map(move |s| (*m, *s)))
        .collect();

    let run = || -> Result<Vec<Vec<SweepRecord<T>>>> {
        units
            .par_iter()
            .map(|&(m, s)| run_unit(scenario, s, m))
            .collect()
    };
    let per_unit = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let records: Vec<SweepRecord<T>> = per_unit.into_iter().flatten().collect();

    let mut aggregates = Vec::new();
    let mut keys: Vec<(Variant, Option<Criterion>, usize, usize)> = Vec::new();
    for v in [Variant::Discrete, Variant::Smooth, Variant::Baseline] {
        let crits: Vec<Option<Criterion>> = match v {
            Variant::Discrete => cfg.criteria.iter().map(|c| Some(*c)).collect(),
            Variant::Smooth if cfg.smooth => cfg.criteria.iter().map(|c| Some(*c)).collect(),
            Variant::Baseline if cfg.baseline => vec![None],
            _ => vec![],
        };
        for c in crits {
            for (ti, _) in cfg.total_times_s.iter().enumerate() {
                for &m in &cfg.n_mbs {
                    keys.push((v, c, ti, m));
                }
            }
        }
    }
    for (variant, criterion, ti, n_mbs) in keys {
        let t = T::of(cfg.total_times_s[ti]);
        let mut caps = Vec::new();
        let mut outs = Vec::new();
        let mut objs = Vec::new();
        let mut infeasible = 0;
        for r in records
            .iter()
            .filter(|r| r.variant == variant && r.criterion == criterion && r.total_time_s == t && r.n_mbs == n_mbs)
        {
            match r.metrics() {
                Some(m) => {
                    caps.push(m.per_ue_capacity);
                    outs.push(m.outage_probability);
                    objs.push(m.total_objective);
                }
                None => infeasible += 1,
            }
        }
        let (mean_capacity, std_capacity) = mean_std(&caps);
        let (mean_outage, std_outage) = mean_std(&outs);
        aggregates.push(Aggregate {
            variant,
            criterion,
            total_time_s: t,
            n_mbs,
            seeds: caps.len(),
            infeasible,
            mean_capacity,
            std_capacity,
            mean_outage,
            std_outage,
            mean_objective: mean_std(&objs).0,
        });
    }

    Ok(SweepReport {
        config: cfg.clone(),
        threshold: scenario.outage_threshold(),
        samples_per_interval: scenario.samples_per_interval(),
        records,
        aggregates,
    })
}
