//! Finite-horizon backward dynamic programming over (time step, grid cell).
//!
//! The stage reward of step `i` is the reward of the cell occupied at the
//! start of that step. Terminal cost is zero at the destination and
//! infeasible everywhere else, so every extracted plan ends exactly there.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::radio::{Criterion, RewardMap};
use crate::scenario::{Cell, GridSpec, MissionSpec};
use crate::Scalar;

/// Heading/speed pair applied for one interval.
///
/// Axis moves fly at 12.5 m/s and diagonals at 17.7 m/s; on the 100 m lattice
/// with 8 s intervals each action moves exactly one cell per axis. Variant
/// order is the canonical tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ControlAction {
    Stay,
    E,
    N,
    W,
    S,
    NE,
    NW,
    SW,
    SE,
}

impl ControlAction {
    pub const ALL: [ControlAction; 9] = [
        ControlAction::Stay,
        ControlAction::E,
        ControlAction::N,
        ControlAction::W,
        ControlAction::S,
        ControlAction::NE,
        ControlAction::NW,
        ControlAction::SW,
        ControlAction::SE,
    ];

    pub const AXIS_SPEED_MPS: f64 = 12.5;
    pub const DIAGONAL_SPEED_MPS: f64 = 17.7;

    pub fn label(self) -> &'static str {
        match self {
            ControlAction::Stay => "stay",
            ControlAction::E => "E",
            ControlAction::N => "N",
            ControlAction::W => "W",
            ControlAction::S => "S",
            ControlAction::NE => "NE",
            ControlAction::NW => "NW",
            ControlAction::SW => "SW",
            ControlAction::SE => "SE",
        }
    }

    /// Nominal speed of the action in m/s.
    pub fn speed_mps<T: Scalar>(self) -> T {
        match self {
            ControlAction::Stay => T::zero(),
            ControlAction::E | ControlAction::N | ControlAction::W | ControlAction::S => T::of(Self::AXIS_SPEED_MPS),
            _ => T::of(Self::DIAGONAL_SPEED_MPS),
        }
    }

    /// Azimuth in radians, counter-clockwise from +x.
    pub fn heading_rad<T: Scalar>(self) -> T {
        let quarter = T::FRAC_PI_2();
        let eighth = T::FRAC_PI_4();
        match self {
            ControlAction::Stay | ControlAction::E => T::zero(),
            ControlAction::N => quarter,
            ControlAction::W => T::PI(),
            ControlAction::S => T::of(3.0) * quarter,
            ControlAction::NE => eighth,
            ControlAction::NW => T::of(3.0) * eighth,
            ControlAction::SW => T::of(5.0) * eighth,
            ControlAction::SE => T::of(7.0) * eighth,
        }
    }

    /// Lattice displacement `(dx, dy)` in cells.
    pub fn offset(self) -> (isize, isize) {
        match self {
            ControlAction::Stay => (0, 0),
            ControlAction::E => (1, 0),
            ControlAction::N => (0, 1),
            ControlAction::W => (-1, 0),
            ControlAction::S => (0, -1),
            ControlAction::NE => (1, 1),
            ControlAction::NW => (-1, 1),
            ControlAction::SW => (-1, -1),
            ControlAction::SE => (1, -1),
        }
    }
}

impl fmt::Display for ControlAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Cell reached from `cell` under `action`, or `None` if the move leaves the grid.
pub fn apply_control<T: Scalar>(cell: Cell, action: ControlAction, grid: &GridSpec<T>) -> Option<Cell> {
    let (dx, dy) = action.offset();
    let next = Cell::new(cell.ix.checked_add_signed(dx)?, cell.iy.checked_add_signed(dy)?);
    grid.contains(next).then_some(next)
}

/// Whether `dest` can be reached from `start` in `steps` moves.
pub fn feasible(start: Cell, dest: Cell, steps: usize) -> bool {
    start.chebyshev(dest) <= steps
}

/// Cost-to-go and greedy policy for every (step, cell).
#[derive(Debug, Clone)]
pub struct ValueTable<T> {
    grid: GridSpec<T>,
    steps: usize,
    /// `(steps + 1) x cells`, `-inf` where the destination is unreachable.
    values: Vec<T>,
    /// `steps x cells`.
    policy: Vec<Option<ControlAction>>,
}

impl<T: Scalar> ValueTable<T> {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    /// Cost-to-go at step `i`, `None` when the destination is out of reach.
    pub fn value(&self, i: usize, cell: Cell) -> Option<T> {
        let v = self.values[i * self.grid.cell_count() + self.grid.index(cell)];
        v.is_finite().then_some(v)
    }

    pub fn policy(&self, i: usize, cell: Cell) -> Option<ControlAction> {
        self.policy[i * self.grid.cell_count() + self.grid.index(cell)]
    }
}

/// Backward Bellman recursion
/// `J[i][c] = reward[c] + max_a J[i+1][next(c, a)]`, `i = N-1 .. 0`.
///
/// Ties are broken by the canonical action order.
pub fn solve_dp<T: Scalar>(rm: &RewardMap<T>, mission: &MissionSpec<T>) -> Result<ValueTable<T>> {
    let grid = rm.grid;
    let n = mission.steps();
    let cells = grid.cell_count();
    if !grid.contains(mission.start_cell) || !grid.contains(mission.dest_cell) {
        return Err(Error::config("mission", "start or destination outside the reward map grid"));
    }

    let mut values = vec![T::neg_infinity(); (n + 1) * cells];
    let mut policy = vec![None; n * cells];
    values[n * cells + grid.index(mission.dest_cell)] = T::zero();

    for i in (0..n).rev() {
        let (head, tail) = values.split_at_mut((i + 1) * cells);
        let next = &tail[..cells];
        let slice: Vec<(T, Option<ControlAction>)> = (0..cells)
            .into_par_iter()
            .map(|idx| {
                let cell = grid.cell(idx);
                let mut best: Option<(T, ControlAction)> = None;
                for action in ControlAction::ALL {
                    let Some(to) = apply_control(cell, action, &grid) else { continue };
                    let v = next[grid.index(to)];
                    if !v.is_finite() {
                        continue;
                    }
                    if best.is_none_or(|(b, _)| v > b) {
                        best = Some((v, action));
                    }
                }
                match best {
                    Some((v, a)) => (rm.values[idx] + v, Some(a)),
                    None => (T::neg_infinity(), None),
                }
            })
            .collect();
        for (idx, (v, a)) in slice.into_iter().enumerate() {
            head[i * cells + idx] = v;
            policy[i * cells + idx] = a;
        }
    }

    if !values[grid.index(mission.start_cell)].is_finite() {
        return Err(Error::Infeasible {
            distance: mission.start_cell.chebyshev(mission.dest_cell),
            steps: n,
        });
    }
    Ok(ValueTable {
        grid,
        steps: n,
        values,
        policy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint<T> {
    pub cell: Cell,
    pub position: Point2<T>,
    pub t_s: T,
}

/// Planned path: `N + 1` waypoints joined by `N` controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub waypoints: Vec<Waypoint<T>>,
    pub controls: Vec<ControlAction>,
    /// Reward collected during each step, at the departing waypoint.
    pub stage_rewards: Vec<T>,
    pub criterion: Criterion,
    pub total_reward: T,
    pub delta_s: T,
    pub total_time_s: T,
}

impl<T: Scalar> Trajectory<T> {
    pub fn steps(&self) -> usize {
        self.controls.len()
    }

    pub fn stay_count(&self) -> usize {
        self.controls.iter().filter(|a| **a == ControlAction::Stay).count()
    }

    /// Longest ground distance covered in one interval, in meters.
    pub fn max_step_m(&self) -> T {
        self.waypoints
            .windows(2)
            .map(|w| w[0].position.distance(w[1].position))
            .fold(T::zero(), T::max)
    }

    pub fn positions(&self) -> Vec<Point2<T>> {
        self.waypoints.iter().map(|w| w.position).collect()
    }
}

/// Forward readout of the policy from the mission start.
pub fn extract_trajectory<T: Scalar>(
    vt: &ValueTable<T>,
    mission: &MissionSpec<T>,
    rm: &RewardMap<T>,
) -> Result<Trajectory<T>> {
    let grid = vt.grid;
    let start_value = vt.value(0, mission.start_cell).ok_or(Error::Infeasible {
        distance: mission.start_cell.chebyshev(mission.dest_cell),
        steps: vt.steps,
    })?;

    let n = vt.steps;
    let mut cell = mission.start_cell;
    let mut waypoints = Vec::with_capacity(n + 1);
    let mut controls = Vec::with_capacity(n);
    let mut stage_rewards = Vec::with_capacity(n);
    for i in 0..n {
        waypoints.push(Waypoint {
            cell,
            position: grid.center(cell),
            t_s: mission.delta_s * T::of_usize(i),
        });
        stage_rewards.push(rm.value(cell));
        let action = vt.policy(i, cell).expect("finite value implies a policy entry");
        controls.push(action);
        cell = apply_control(cell, action, &grid).expect("policy only stores feasible moves");
    }
    waypoints.push(Waypoint {
        cell,
        position: grid.center(cell),
        t_s: mission.delta_s * T::of_usize(n),
    });
    debug_assert_eq!(cell, mission.dest_cell);

    // Same association order as the recursion, so this reproduces J[0][start].
    let total_reward = stage_rewards.iter().rev().fold(T::zero(), |acc, r| *r + acc);
    debug_assert!(total_reward == start_value);

    Ok(Trajectory {
        waypoints,
        controls,
        stage_rewards,
        criterion: rm.criterion,
        total_reward,
        delta_s: mission.delta_s,
        total_time_s: mission.total_time_s,
    })
}

/// Solves and extracts in one call.
pub fn plan<T: Scalar>(rm: &RewardMap<T>, mission: &MissionSpec<T>) -> Result<Trajectory<T>> {
    let vt = solve_dp(rm, mission)?;
    extract_trajectory(&vt, mission, rm)
}
