//! Network realizations, the planning lattice and mission definitions.

mod config;

pub use config::{
    load_scenario, parse_scenario, AreaConfig, EvaluationConfig, GridConfig, MissionConfig,
    NetworkConfig, RadioConfig, Scenario, ScenarioConfig,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::propagation::{hata_coefficients, Environment, PathLossCoefficients, DEFAULT_MIN_DISTANCE_KM};
use crate::Scalar;

/// Default SIR cap, linear.
pub const DEFAULT_SIR_CAP: f64 = 1e10;

/// Rectangular service area anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaSpec<T> {
    pub width_m: T,
    pub height_m: T,
}

impl<T: Scalar> AreaSpec<T> {
    pub fn new(width_m: T, height_m: T) -> Result<Self> {
        if !(width_m.is_finite() && width_m > T::zero()) {
            return Err(Error::config("area.width_m", format!("must be positive, got {width_m}")));
        }
        if !(height_m.is_finite() && height_m > T::zero()) {
            return Err(Error::config("area.height_m", format!("must be positive, got {height_m}")));
        }
        Ok(Self { width_m, height_m })
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= T::zero() && p.x <= self.width_m && p.y >= T::zero() && p.y <= self.height_m
    }
}

/// Lattice coordinate of a grid cell; `ix` runs along x, `iy` along y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub ix: usize,
    pub iy: usize,
}

impl Cell {
    pub const fn new(ix: usize, iy: usize) -> Self {
        Self { ix, iy }
    }

    /// Minimum number of 8-connected moves between two cells.
    pub fn chebyshev(self, other: Cell) -> usize {
        self.ix.abs_diff(other.ix).max(self.iy.abs_diff(other.iy))
    }
}

/// Regular lattice of candidate UAV positions. Cells are indexed row-major,
/// `index = iy * nx + ix`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub origin: Point2<T>,
    pub step_m: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(origin: Point2<T>, step_m: T, nx: usize, ny: usize) -> Result<Self> {
        if !(step_m.is_finite() && step_m > T::zero()) {
            return Err(Error::config("grid.step_m", format!("must be positive, got {step_m}")));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::config("grid", format!("need at least 2x2 cells, got {nx}x{ny}")));
        }
        Ok(Self { origin, step_m, nx, ny })
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.ix < self.nx && cell.iy < self.ny
    }

    pub fn index(&self, cell: Cell) -> usize {
        debug_assert!(self.contains(cell));
        cell.iy * self.nx + cell.ix
    }

    pub fn cell(&self, index: usize) -> Cell {
        Cell::new(index % self.nx, index / self.nx)
    }

    pub fn center(&self, cell: Cell) -> Point2<T> {
        Point2::new(
            self.origin.x + self.step_m * T::of_usize(cell.ix),
            self.origin.y + self.step_m * T::of_usize(cell.iy),
        )
    }

    /// Cells in index order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count()).map(move |i| self.cell(i))
    }

    /// Nearest cell to `p` and the distance to its center, or `None` when the
    /// point lies outside the lattice by more than half a step.
    pub fn snap(&self, p: Point2<T>) -> Option<(Cell, T)> {
        let fx = ((p.x - self.origin.x) / self.step_m).round();
        let fy = ((p.y - self.origin.y) / self.step_m).round();
        if !(fx >= T::zero() && fy >= T::zero()) {
            return None;
        }
        let (ix, iy) = (fx.to_usize()?, fy.to_usize()?);
        let cell = Cell::new(ix, iy);
        if !self.contains(cell) {
            return None;
        }
        Some((cell, self.center(cell).distance(p)))
    }
}

/// Lattice spanning `area` with spacing `step_m`; the step must divide both
/// dimensions.
pub fn make_grid<T: Scalar>(area: &AreaSpec<T>, step_m: T) -> Result<GridSpec<T>> {
    if !(step_m.is_finite() && step_m > T::zero()) {
        return Err(Error::config("grid.step_m", format!("must be positive, got {step_m}")));
    }
    let divisions = |len: T, field: &str| -> Result<usize> {
        let q = len / step_m;
        let n = q.round();
        if (q - n).abs() > T::of(1e-9) * q.max(T::one()) || n < T::one() {
            return Err(Error::config(
                field,
                format!("grid step {step_m} m does not divide {len} m"),
            ));
        }
        Ok(n.to_usize().expect("finite positive count"))
    };
    let cols = divisions(area.width_m, "grid.step_m")?;
    let rows = divisions(area.height_m, "grid.step_m")?;
    GridSpec::new(Point2::new(T::zero(), T::zero()), step_m, cols + 1, rows + 1)
}

/// Radio and antenna parameters shared by all links of a network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams<T> {
    pub fc_mhz: T,
    pub p_mbs_dbm: T,
    pub p_uav_dbm: T,
    pub mbs_height_m: T,
    pub ue_height_m: T,
    pub uav_height_m: T,
    pub environment: Environment,
    pub min_distance_km: T,
    /// Linear SIR ceiling used when a UE sees no interference.
    pub sir_cap: T,
    /// Accept carrier frequencies outside the Hata range.
    pub force_frequency: bool,
}

impl<T: Scalar> Default for RadioParams<T> {
    fn default() -> Self {
        Self {
            fc_mhz: T::of(1500.0),
            p_mbs_dbm: T::of(46.0),
            p_uav_dbm: T::of(30.0),
            mbs_height_m: T::of(30.0),
            ue_height_m: T::of(2.0),
            uav_height_m: T::of(120.0),
            environment: Environment::Suburban,
            min_distance_km: T::of(DEFAULT_MIN_DISTANCE_KM),
            sir_cap: T::of(DEFAULT_SIR_CAP),
            force_frequency: false,
        }
    }
}

impl<T: Scalar> RadioParams<T> {
    fn validate(&self) -> Result<()> {
        let positive = |v: T, field: &str| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be positive, got {v}")))
            }
        };
        positive(self.mbs_height_m, "radio.mbs_height_m")?;
        positive(self.ue_height_m, "radio.ue_height_m")?;
        positive(self.uav_height_m, "radio.uav_height_m")?;
        positive(self.min_distance_km, "radio.min_distance_km")?;
        positive(self.sir_cap, "radio.sir_cap")?;
        if self.uav_height_m <= self.ue_height_m {
            return Err(Error::config(
                "radio.uav_height_m",
                "UAV must fly above the user terminals",
            ));
        }
        if self.mbs_height_m == self.ue_height_m {
            return Err(Error::config(
                "radio.mbs_height_m",
                "MBS and UE antenna heights must differ",
            ));
        }
        if !(self.p_mbs_dbm.is_finite() && self.p_uav_dbm.is_finite()) {
            return Err(Error::config("radio", "transmit powers must be finite"));
        }
        Ok(())
    }

    pub fn cast<U: Scalar>(&self) -> RadioParams<U> {
        RadioParams {
            fc_mhz: U::of(self.fc_mhz.as_f64()),
            p_mbs_dbm: U::of(self.p_mbs_dbm.as_f64()),
            p_uav_dbm: U::of(self.p_uav_dbm.as_f64()),
            mbs_height_m: U::of(self.mbs_height_m.as_f64()),
            ue_height_m: U::of(self.ue_height_m.as_f64()),
            uav_height_m: U::of(self.uav_height_m.as_f64()),
            environment: self.environment,
            min_distance_km: U::of(self.min_distance_km.as_f64()),
            sir_cap: U::of(self.sir_cap.as_f64()),
            force_frequency: self.force_frequency,
        }
    }
}

/// One fixed placement of base stations and users with its radio setup.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization<T> {
    pub area: AreaSpec<T>,
    pub mbs_positions: Vec<Point2<T>>,
    pub ue_positions: Vec<Point2<T>>,
    pub radio: RadioParams<T>,
    /// Seed the realization was drawn from; `None` for explicit placements.
    pub seed: Option<u64>,
    mbs_coefficients: PathLossCoefficients<T>,
    uav_coefficients: PathLossCoefficients<T>,
}

impl<T: Scalar> NetworkRealization<T> {
    pub fn new(
        area: AreaSpec<T>,
        mbs_positions: Vec<Point2<T>>,
        ue_positions: Vec<Point2<T>>,
        radio: RadioParams<T>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if mbs_positions.is_empty() {
            return Err(Error::config("network.n_mbs", "at least one base station is required"));
        }
        if ue_positions.is_empty() {
            return Err(Error::config("network.n_ue", "at least one user is required"));
        }
        if let Some(i) = mbs_positions.iter().position(|p| !area.contains(*p)) {
            return Err(Error::config(
                "network.mbs_positions",
                format!("base station {i} lies outside the area"),
            ));
        }
        if let Some(i) = ue_positions.iter().position(|p| !area.contains(*p)) {
            return Err(Error::config(
                "network.ue_positions",
                format!("user {i} lies outside the area"),
            ));
        }
        radio.validate()?;
        let coeffs = |hb: T| {
            hata_coefficients(radio.fc_mhz, hb, radio.ue_height_m, radio.environment, radio.force_frequency)
                .map_err(|e| Error::config("radio.fc_mhz", e.to_string()))
        };
        Ok(Self {
            area,
            mbs_coefficients: coeffs(radio.mbs_height_m)?,
            uav_coefficients: coeffs(radio.uav_height_m)?,
            mbs_positions,
            ue_positions,
            radio,
            seed,
        })
    }

    pub fn n_mbs(&self) -> usize {
        self.mbs_positions.len()
    }

    pub fn n_ue(&self) -> usize {
        self.ue_positions.len()
    }

    pub fn mbs_coefficients(&self) -> &PathLossCoefficients<T> {
        &self.mbs_coefficients
    }

    pub fn uav_coefficients(&self) -> &PathLossCoefficients<T> {
        &self.uav_coefficients
    }

    /// Rigid shift of every position; the area is kept as is, so callers
    /// translating outside it must use [`Self::new`] with a larger area.
    pub fn translated(&self, offset: Point2<T>, area: AreaSpec<T>) -> Result<Self> {
        Self::new(
            area,
            self.mbs_positions.iter().map(|p| *p + offset).collect(),
            self.ue_positions.iter().map(|p| *p + offset).collect(),
            self.radio,
            self.seed,
        )
    }
}

const MBS_STREAM: u64 = 1;
const UE_STREAM: u64 = 2;

fn uniform_points<T: Scalar>(seed: u64, stream: u64, n: usize, area: &AreaSpec<T>) -> Vec<Point2<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (w, h) = (area.width_m.as_f64(), area.height_m.as_f64());
    (0..n)
        .map(|_| {
            let x: f64 = rng.gen();
            let y: f64 = rng.gen();
            Point2::new(T::of(x * w), T::of(y * h))
        })
        .collect()
}

/// Draws `n_mbs` base stations and `n_ue` users uniformly over `area`.
///
/// Base stations and users come from independent ChaCha streams keyed by
/// `seed`, so for a fixed seed the first `m` base stations and all users are
/// shared between realizations that differ only in `n_mbs`.
pub fn generate_network<T: Scalar>(
    seed: u64,
    n_mbs: usize,
    n_ue: usize,
    area: &AreaSpec<T>,
    radio: RadioParams<T>,
) -> Result<NetworkRealization<T>> {
    if n_mbs == 0 {
        return Err(Error::config("network.n_mbs", "must be at least 1"));
    }
    if n_ue == 0 {
        return Err(Error::config("network.n_ue", "must be at least 1"));
    }
    let area = AreaSpec::new(area.width_m, area.height_m)?;
    NetworkRealization::new(
        area,
        uniform_points(seed, MBS_STREAM, n_mbs, &area),
        uniform_points(seed, UE_STREAM, n_ue, &area),
        radio,
        Some(seed),
    )
}

/// Start/destination pair with the timing of a mission, resolved on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissionSpec<T> {
    pub start: Point2<T>,
    pub dest: Point2<T>,
    pub start_cell: Cell,
    pub dest_cell: Cell,
    pub total_time_s: T,
    pub delta_s: T,
    pub v_max_mps: T,
    steps: usize,
}

impl<T: Scalar> MissionSpec<T> {
    /// Validates timing and snaps both endpoints to grid cell centers.
    ///
    /// Reachability is not checked here; the planner reports it as
    /// [`Error::Infeasible`].
    pub fn new(
        start: Point2<T>,
        dest: Point2<T>,
        total_time_s: T,
        delta_s: T,
        v_max_mps: T,
        grid: &GridSpec<T>,
    ) -> Result<Self> {
        if !(delta_s.is_finite() && delta_s > T::zero()) {
            return Err(Error::config("mission.delta_s", format!("must be positive, got {delta_s}")));
        }
        if !(total_time_s.is_finite() && total_time_s >= T::zero()) {
            return Err(Error::config(
                "mission.total_time_s",
                format!("must be non-negative, got {total_time_s}"),
            ));
        }
        let q = total_time_s / delta_s;
        let n = q.round();
        if (q - n).abs() > T::of(1e-9) * q.max(T::one()) {
            return Err(Error::config(
                "mission.total_time_s",
                format!("{total_time_s} s is not a whole multiple of delta_s = {delta_s} s"),
            ));
        }
        if !(v_max_mps.is_finite() && v_max_mps > T::zero()) {
            return Err(Error::config("mission.v_max_mps", format!("must be positive, got {v_max_mps}")));
        }
        // A diagonal move spans one lattice step on both axes.
        let diagonal = grid.step_m * T::SQRT_2();
        if diagonal > v_max_mps * delta_s + T::of(1e-6) {
            return Err(Error::config(
                "mission.v_max_mps",
                format!(
                    "diagonal lattice move of {diagonal} m exceeds v_max * delta_s = {} m",
                    v_max_mps * delta_s
                ),
            ));
        }
        let snap = |p: Point2<T>, field: &str| -> Result<Cell> {
            match grid.snap(p) {
                Some((cell, d)) if d <= grid.step_m / T::of(2.0) => Ok(cell),
                _ => Err(Error::config(
                    field,
                    format!("({}, {}) m is not on the planning grid", p.x, p.y),
                )),
            }
        };
        let start_cell = snap(start, "mission.start_m")?;
        let dest_cell = snap(dest, "mission.dest_m")?;
        Ok(Self {
            start: grid.center(start_cell),
            dest: grid.center(dest_cell),
            start_cell,
            dest_cell,
            total_time_s,
            delta_s,
            v_max_mps,
            steps: n.to_usize().expect("non-negative step count"),
        })
    }

    /// Number of control intervals `N = T / delta`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Same endpoints and speed with a different duration.
    pub fn with_total_time(&self, total_time_s: T, grid: &GridSpec<T>) -> Result<Self> {
        Self::new(self.start, self.dest, total_time_s, self.delta_s, self.v_max_mps, grid)
    }

    /// Minimum flight time at full speed along the straight line.
    pub fn min_time_s(&self) -> T {
        self.start.distance(self.dest) / self.v_max_mps
    }
}
