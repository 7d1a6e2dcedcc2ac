//! Association, SIR, round-robin rates and network objectives.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::Point2;
use crate::propagation::{link_distance_km, mw_to_dbm, received_power_mw};
use crate::scenario::{GridSpec, NetworkRealization};
use crate::Scalar;

/// Network objective maximized by the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    /// Proportional fair: sum of log10 rates.
    #[serde(rename = "pf")]
    Pf,
    /// Sum of rates.
    #[serde(rename = "sumrate")]
    SumRate,
    /// Fifth-percentile rate.
    #[serde(rename = "fivepse")]
    FivePse,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Pf, Criterion::SumRate, Criterion::FivePse];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Pf => "pf",
            Criterion::SumRate => "sumrate",
            Criterion::FivePse => "fivepse",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pf" => Ok(Criterion::Pf),
            "sumrate" => Ok(Criterion::SumRate),
            "fivepse" => Ok(Criterion::FivePse),
            other => Err(format!("unknown criterion `{other}` (expected pf, sumrate or fivepse)")),
        }
    }
}

/// Received powers in mW, one row per UE and one column per transmitter.
/// When present, the UAV is the last column.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMatrix<T> {
    values: Vec<T>,
    n_ue: usize,
    n_tx: usize,
    has_uav: bool,
    sir_cap: T,
}

impl<T: Scalar> PowerMatrix<T> {
    /// Builds a matrix from row-major values.
    pub fn from_rows(rows: &[Vec<T>], has_uav: bool, sir_cap: T) -> Self {
        let n_tx = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_tx), "ragged power matrix");
        Self {
            values: rows.concat(),
            n_ue: rows.len(),
            n_tx,
            has_uav,
            sir_cap,
        }
    }

    pub fn n_ue(&self) -> usize {
        self.n_ue
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn has_uav(&self) -> bool {
        self.has_uav
    }

    pub fn sir_cap(&self) -> T {
        self.sir_cap
    }

    pub fn get(&self, ue: usize, tx: usize) -> T {
        self.values[ue * self.n_tx + tx]
    }

    pub fn row(&self, ue: usize) -> &[T] {
        &self.values[ue * self.n_tx..(ue + 1) * self.n_tx]
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            values: self.values.iter().map(|v| *v * factor).collect(),
            ..self.clone()
        }
    }
}

/// Terrestrial part of the link budget for one network, cached so that
/// evaluating many UAV positions only recomputes the UAV column.
#[derive(Debug, Clone)]
pub struct LinkBudget<'a, T> {
    net: &'a NetworkRealization<T>,
    mbs_powers: Vec<T>,
}

impl<'a, T: Scalar> LinkBudget<'a, T> {
    pub fn new(net: &'a NetworkRealization<T>) -> Self {
        let r = &net.radio;
        let mut mbs_powers = Vec::with_capacity(net.n_ue() * net.n_mbs());
        for ue in &net.ue_positions {
            let rx = ue.at_height(r.ue_height_m);
            for mbs in &net.mbs_positions {
                mbs_powers.push(link_power(
                    net,
                    mbs.at_height(r.mbs_height_m),
                    rx,
                    r.p_mbs_dbm,
                    false,
                ));
            }
        }
        Self { net, mbs_powers }
    }

    pub fn network(&self) -> &NetworkRealization<T> {
        self.net
    }

    pub fn powers(&self, uav_xy: Option<Point2<T>>) -> PowerMatrix<T> {
        let r = &self.net.radio;
        let m = self.net.n_mbs();
        let Some(uav) = uav_xy else {
            return PowerMatrix {
                values: self.mbs_powers.clone(),
                n_ue: self.net.n_ue(),
                n_tx: m,
                has_uav: false,
                sir_cap: r.sir_cap,
            };
        };
        let tx = uav.at_height(r.uav_height_m);
        let mut values = Vec::with_capacity(self.net.n_ue() * (m + 1));
        for (k, ue) in self.net.ue_positions.iter().enumerate() {
            values.extend_from_slice(&self.mbs_powers[k * m..(k + 1) * m]);
            values.push(link_power(self.net, tx, ue.at_height(r.ue_height_m), r.p_uav_dbm, true));
        }
        PowerMatrix {
            values,
            n_ue: self.net.n_ue(),
            n_tx: m + 1,
            has_uav: true,
            sir_cap: r.sir_cap,
        }
    }

    /// Per-UE rates with the UAV at `uav_xy` (or absent).
    pub fn rates(&self, uav_xy: Option<Point2<T>>) -> RateVector<T> {
        let p = self.powers(uav_xy);
        let a = associate(&p);
        user_rates(&p, &a)
    }
}

fn link_power<T: Scalar>(
    net: &NetworkRealization<T>,
    tx: crate::geometry::Point3<T>,
    rx: crate::geometry::Point3<T>,
    tx_power_dbm: T,
    uav: bool,
) -> T {
    let c = if uav { net.uav_coefficients() } else { net.mbs_coefficients() };
    let d = link_distance_km(tx, rx);
    // Heights differ, so d > 0 and the loss is always defined.
    let pl = c
        .loss_db(d, net.radio.min_distance_km)
        .expect("transmitter and receiver heights differ");
    received_power_mw(tx_power_dbm, pl)
}

/// Received powers at every UE from every MBS and, when `uav_xy` is given,
/// from the UAV hovering there.
pub fn compute_link_powers<T: Scalar>(net: &NetworkRealization<T>, uav_xy: Option<Point2<T>>) -> PowerMatrix<T> {
    LinkBudget::new(net).powers(uav_xy)
}

/// Serving transmitter per UE and the resulting cell loads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    pub serving: Vec<usize>,
    pub cell_size: Vec<usize>,
}

/// Each UE attaches to its strongest transmitter; ties go to the lowest index.
///
/// For a fixed total received power the strongest transmitter is also the
/// one with the best SIR.
pub fn associate<T: Scalar>(p: &PowerMatrix<T>) -> Association {
    let mut cell_size = vec![0; p.n_tx()];
    let serving = (0..p.n_ue())
        .map(|k| {
            let row = p.row(k);
            let mut best = 0;
            for (j, v) in row.iter().enumerate().skip(1) {
                if *v > row[best] {
                    best = j;
                }
            }
            cell_size[best] += 1;
            best
        })
        .collect();
    Association { serving, cell_size }
}

/// Per-UE spectral efficiency in bps/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector<T> {
    pub rates: Vec<T>,
}

/// Linear SIR of UE `k` towards transmitter `j`, capped at the matrix cap.
pub fn sir_towards<T: Scalar>(p: &PowerMatrix<T>, k: usize, j: usize) -> T {
    let row = p.row(k);
    let interference = row
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .fold(T::zero(), |acc, (_, v)| acc + *v);
    if interference <= T::zero() {
        return p.sir_cap();
    }
    (row[j] / interference).min(p.sir_cap())
}

/// `log2(1 + SIR) / N_ue` with `N_ue` the load of the serving cell.
pub fn user_rates<T: Scalar>(p: &PowerMatrix<T>, a: &Association) -> RateVector<T> {
    debug_assert_eq!(a.serving.len(), p.n_ue());
    let rates = a
        .serving
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let gamma = sir_towards(p, k, s);
            gamma.ln_1p() / T::LN_2() / T::of_usize(a.cell_size[s])
        })
        .collect();
    RateVector { rates }
}

/// Rank (1-based) of the 5th-percentile order statistic for `k` users.
pub fn fifth_percentile_rank(k: usize) -> usize {
    (k * 5).div_ceil(100).max(1)
}

pub fn objective_value<T: Scalar>(r: &RateVector<T>, criterion: Criterion) -> T {
    match criterion {
        Criterion::Pf => r.rates.iter().fold(T::zero(), |acc, x| acc + x.log10()),
        Criterion::SumRate => r.rates.iter().fold(T::zero(), |acc, x| acc + *x),
        Criterion::FivePse => {
            if r.rates.is_empty() {
                return T::zero();
            }
            let mut v = r.rates.clone();
            let rank = fifth_percentile_rank(v.len());
            let (_, nth, _) = v.select_nth_unstable_by(rank - 1, |a, b| a.partial_cmp(b).expect("finite rates"));
            *nth
        }
    }
}

/// Objective value per grid cell with the UAV hovering at the cell center.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardMap<T> {
    pub grid: GridSpec<T>,
    pub criterion: Criterion,
    pub values: Vec<T>,
}

impl<T: Scalar> RewardMap<T> {
    pub fn new(grid: GridSpec<T>, criterion: Criterion, values: Vec<T>) -> Self {
        assert_eq!(values.len(), grid.cell_count(), "one reward per cell");
        Self { grid, criterion, values }
    }

    pub fn value(&self, cell: crate::scenario::Cell) -> T {
        self.values[self.grid.index(cell)]
    }

    /// Index of the best cell, lowest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }
}

pub fn reward_map<T: Scalar>(net: &NetworkRealization<T>, grid: &GridSpec<T>, criterion: Criterion) -> RewardMap<T> {
    let budget = LinkBudget::new(net);
    let values = (0..grid.cell_count())
        .into_par_iter()
        .map(|i| objective_value(&budget.rates(Some(grid.center(grid.cell(i)))), criterion))
        .collect();
    RewardMap::new(*grid, criterion, values)
}

/// Best-server SIR in dB that a ground receiver at each cell center would see
/// from the terrestrial base stations alone.
pub fn sir_heatmap_db<T: Scalar>(net: &NetworkRealization<T>, grid: &GridSpec<T>) -> Vec<T> {
    let r = &net.radio;
    grid.cells()
        .map(|cell| {
            let rx = grid.center(cell).at_height(r.ue_height_m);
            let row: Vec<T> = net
                .mbs_positions
                .iter()
                .map(|m| link_power(net, m.at_height(r.mbs_height_m), rx, r.p_mbs_dbm, false))
                .collect();
            let p = PowerMatrix::from_rows(&[row], false, r.sir_cap);
            let a = associate(&p);
            mw_to_dbm(sir_towards(&p, 0, a.serving[0]))
        })
        .collect()
}
