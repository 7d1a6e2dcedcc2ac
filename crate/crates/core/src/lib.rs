//! Time-constrained UAV trajectory planning for cellular coverage.
//!
//! A UAV flies between two points of a service area within a fixed mission
//! time and acts as an extra base station on the way. The crate generates
//! random interference-limited networks, evaluates per-user rates under
//! Okumura-Hata propagation, finds the trajectory maximizing a network
//! objective by backward dynamic programming on a lattice, smooths it with a
//! Bezier curve, and measures capacity and outage.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the bottom of this file fix the scalar for the common case.

pub mod error;
pub mod evaluation;
pub mod export;
pub mod geometry;
pub mod planner;
pub mod propagation;
pub mod radio;
pub mod scalar;
pub mod scenario;
pub mod smoothing;

pub use error::{Error, Result};
pub use evaluation::{
    baseline_metrics, evaluate_discrete, evaluate_smooth, run_sweep, Aggregate, Outcome, SweepConfig, SweepRecord,
    SweepReport, TrajectoryMetrics, Variant,
};
pub use geometry::{Point2, Point3};
pub use planner::{apply_control, extract_trajectory, feasible, plan, solve_dp, ControlAction, Trajectory, ValueTable};
pub use propagation::{hata_coefficients, link_distance_km, path_loss_db, received_power_mw, Environment, PathLossCoefficients};
pub use radio::{associate, compute_link_powers, objective_value, reward_map, user_rates, Association, Criterion, PowerMatrix, RateVector, RewardMap};
pub use scalar::Scalar;
pub use scenario::{generate_network, load_scenario, make_grid, AreaSpec, Cell, GridSpec, MissionSpec, NetworkRealization, RadioParams, Scenario};
pub use smoothing::{bernstein, max_ground_speed, smooth_trajectory, BezierCurve, SmoothTrajectory};

pub type NetworkF64 = NetworkRealization<f64>;
pub type NetworkF32 = NetworkRealization<f32>;
pub type GridF64 = GridSpec<f64>;
pub type MissionF64 = MissionSpec<f64>;
pub type RewardMapF64 = RewardMap<f64>;
pub type ValueTableF64 = ValueTable<f64>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type TrajectoryF32 = Trajectory<f32>;
pub type SmoothTrajectoryF64 = SmoothTrajectory<f64>;
pub type MetricsF64 = TrajectoryMetrics<f64>;
pub type SweepReportF64 = SweepReport<f64>;
