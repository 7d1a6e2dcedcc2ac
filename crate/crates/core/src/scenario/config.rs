//! JSON scenario files.
//!
//! ```json
//! {
//!   "area":    { "width_m": 1000, "height_m": 1000 },
//!   "grid":    { "step_m": 100 },
//!   "network": { "seed": 42, "n_mbs": 4, "n_ue": 100 },
//!   "radio":   { "fc_mhz": 1500, "p_mbs_dbm": 46, "p_uav_dbm": 30 },
//!   "mission": { "start_m": [0, 0], "dest_m": [1000, 1000], "total_time_s": 240, "delta_s": 8 }
//! }
//! ```
//!
//! `network` takes either `{seed, n_mbs, n_ue}` or explicit
//! `mbs_positions`/`ue_positions` lists. Every section except `area` and
//! `network` may be omitted and falls back to the defaults below.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{generate_network, make_grid, AreaSpec, GridSpec, MissionSpec, NetworkRealization, RadioParams};
use crate::error::{Error, Result};
use crate::evaluation::{SweepConfig, DEFAULT_OUTAGE_THRESHOLD};
use crate::geometry::Point2;
use crate::propagation::{Environment, DEFAULT_MIN_DISTANCE_KM};
use crate::smoothing::DEFAULT_SAMPLES_PER_INTERVAL;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub area: AreaConfig,
    #[serde(default)]
    pub grid: GridConfig,
    pub network: NetworkConfig,
    #[serde(default)]
    pub radio: RadioConfig,
    #[serde(default)]
    pub mission: MissionConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaConfig {
    pub width_m: f64,
    pub height_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub step_m: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { step_m: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub seed: Option<u64>,
    pub n_mbs: Option<usize>,
    pub n_ue: Option<usize>,
    pub mbs_positions: Option<Vec<[f64; 2]>>,
    pub ue_positions: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioConfig {
    pub fc_mhz: f64,
    pub p_mbs_dbm: f64,
    pub p_uav_dbm: f64,
    pub mbs_height_m: f64,
    pub ue_height_m: f64,
    pub uav_height_m: f64,
    pub environment: Environment,
    pub min_distance_km: f64,
    pub sir_cap: f64,
    pub force_frequency: bool,
}

impl Default for RadioConfig {
    fn default() -> Self {
        let d = RadioParams::<f64>::default();
        Self {
            fc_mhz: d.fc_mhz,
            p_mbs_dbm: d.p_mbs_dbm,
            p_uav_dbm: d.p_uav_dbm,
            mbs_height_m: d.mbs_height_m,
            ue_height_m: d.ue_height_m,
            uav_height_m: d.uav_height_m,
            environment: d.environment,
            min_distance_km: DEFAULT_MIN_DISTANCE_KM,
            sir_cap: d.sir_cap,
            force_frequency: false,
        }
    }
}

impl RadioConfig {
    fn params<T: Scalar>(&self) -> RadioParams<T> {
        RadioParams {
            fc_mhz: T::of(self.fc_mhz),
            p_mbs_dbm: T::of(self.p_mbs_dbm),
            p_uav_dbm: T::of(self.p_uav_dbm),
            mbs_height_m: T::of(self.mbs_height_m),
            ue_height_m: T::of(self.ue_height_m),
            uav_height_m: T::of(self.uav_height_m),
            environment: self.environment,
            min_distance_km: T::of(self.min_distance_km),
            sir_cap: T::of(self.sir_cap),
            force_frequency: self.force_frequency,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MissionConfig {
    pub start_m: [f64; 2],
    pub dest_m: [f64; 2],
    pub total_time_s: f64,
    pub delta_s: f64,
    pub v_max_mps: f64,
}

impl Default for MissionConfig {
    fn default() -> Self {
        Self {
            start_m: [0.0, 0.0],
            dest_m: [1000.0, 1000.0],
            total_time_s: 240.0,
            delta_s: 8.0,
            v_max_mps: 17.7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationConfig {
    pub outage_threshold_bps_hz: f64,
    pub samples_per_interval: usize,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            outage_threshold_bps_hz: DEFAULT_OUTAGE_THRESHOLD,
            samples_per_interval: DEFAULT_SAMPLES_PER_INTERVAL,
        }
    }
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario<T> {
    pub area: AreaSpec<T>,
    pub grid: GridSpec<T>,
    pub radio: RadioParams<T>,
    pub network: NetworkRealization<T>,
    pub mission: MissionSpec<T>,
    /// The source configuration, kept for regenerating networks in sweeps.
    pub config: ScenarioConfig,
}

impl<T: Scalar> Scenario<T> {
    pub fn outage_threshold(&self) -> T {
        T::of(self.config.evaluation.outage_threshold_bps_hz)
    }

    pub fn samples_per_interval(&self) -> usize {
        self.config.evaluation.samples_per_interval
    }
}

fn points<T: Scalar>(raw: &[[f64; 2]]) -> Vec<Point2<T>> {
    raw.iter().map(|[x, y]| Point2::new(T::of(*x), T::of(*y))).collect()
}

impl ScenarioConfig {
    /// Checks every invariant and builds the scenario.
    pub fn build<T: Scalar>(&self) -> Result<Scenario<T>> {
        let area = AreaSpec::new(T::of(self.area.width_m), T::of(self.area.height_m))?;
        let grid = make_grid(&area, T::of(self.grid.step_m))?;
        let radio = self.radio.params::<T>();

        let n = &self.network;
        let network = match (&n.mbs_positions, &n.ue_positions) {
            (Some(mbs), Some(ue)) => {
                if n.n_mbs.is_some() || n.n_ue.is_some() {
                    return Err(Error::config(
                        "network",
                        "give either explicit positions or n_mbs/n_ue, not both",
                    ));
                }
                NetworkRealization::new(area, points(mbs), points(ue), radio, n.seed)?
            }
            (None, None) => {
                let seed = n.seed.ok_or_else(|| Error::config("network.seed", "required for generated networks"))?;
                let n_mbs = n.n_mbs.ok_or_else(|| Error::config("network.n_mbs", "required for generated networks"))?;
                let n_ue = n.n_ue.ok_or_else(|| Error::config("network.n_ue", "required for generated networks"))?;
                generate_network(seed, n_mbs, n_ue, &area, radio)?
            }
            _ => {
                return Err(Error::config(
                    "network",
                    "mbs_positions and ue_positions must be given together",
                ))
            }
        };

        let m = &self.mission;
        let mission = MissionSpec::new(
            Point2::new(T::of(m.start_m[0]), T::of(m.start_m[1])),
            Point2::new(T::of(m.dest_m[0]), T::of(m.dest_m[1])),
            T::of(m.total_time_s),
            T::of(m.delta_s),
            T::of(m.v_max_mps),
            &grid,
        )?;

        let e = &self.evaluation;
        if !(e.outage_threshold_bps_hz.is_finite() && e.outage_threshold_bps_hz >= 0.0) {
            return Err(Error::config(
                "evaluation.outage_threshold_bps_hz",
                "must be a non-negative number",
            ));
        }
        if e.samples_per_interval == 0 {
            return Err(Error::config("evaluation.samples_per_interval", "must be at least 1"));
        }
        self.sweep.validate(&self.mission)?;

        Ok(Scenario {
            area,
            grid,
            radio,
            network,
            mission,
            config: self.clone(),
        })
    }
}

/// Parses and validates a scenario from JSON text.
pub fn parse_scenario<T: Scalar>(json: &str) -> Result<Scenario<T>> {
    let cfg: ScenarioConfig = serde_json::from_str(json)?;
    cfg.build()
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario<T: Scalar>(path: impl AsRef<Path>) -> Result<Scenario<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}
