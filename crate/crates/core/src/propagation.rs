//! Okumura-Hata path loss and link budget.
//!
//! Path loss follows `A + B log10(d_km) + C` where `A` and `B` are the Hata
//! small/medium-city terms and `C` is the suburban correction. Frequencies
//! are in MHz, antenna heights in meters and distances in kilometers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::Scalar;

/// Nominal Hata validity range in MHz.
pub const HATA_MIN_FREQ_MHZ: f64 = 150.0;
pub const HATA_MAX_FREQ_MHZ: f64 = 1500.0;

/// Distance clamp applied inside the logarithm, in km.
pub const DEFAULT_MIN_DISTANCE_KM: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Environment {
    #[default]
    Suburban,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLossCoefficients<T> {
    pub a_db: T,
    pub b_db_per_decade: T,
    pub c_db: T,
}

impl<T: Scalar> PathLossCoefficients<T> {
    /// Path loss in dB at `d_km`, see [`path_loss_db`].
    pub fn loss_db(&self, d_km: T, d_min_km: T) -> Result<T> {
        path_loss_db(self, d_km, d_min_km)
    }
}

/// Mobile antenna height correction `a(hm)` for small and medium cities.
fn mobile_height_correction<T: Scalar>(log_fc: T, hm_m: T) -> T {
    (T::of(1.1) * log_fc - T::of(0.7)) * hm_m - (T::of(1.56) * log_fc - T::of(0.8))
}

/// Hata coefficients for a transmitter at `hb_m` and receiver at `hm_m`.
///
/// Frequencies outside 150-1500 MHz are rejected unless `force` is set.
pub fn hata_coefficients<T: Scalar>(
    fc_mhz: T,
    hb_m: T,
    hm_m: T,
    environment: Environment,
    force: bool,
) -> Result<PathLossCoefficients<T>> {
    if !(fc_mhz.is_finite() && fc_mhz > T::zero()) {
        return Err(Error::Domain(format!("carrier frequency must be positive, got {fc_mhz} MHz")));
    }
    let in_range = fc_mhz >= T::of(HATA_MIN_FREQ_MHZ) && fc_mhz <= T::of(HATA_MAX_FREQ_MHZ);
    if !in_range && !force {
        return Err(Error::Domain(format!(
            "carrier frequency {fc_mhz} MHz outside the Hata range [{HATA_MIN_FREQ_MHZ}, {HATA_MAX_FREQ_MHZ}] MHz"
        )));
    }
    if !(hb_m > T::zero() && hm_m > T::zero()) {
        return Err(Error::Domain(format!(
            "antenna heights must be positive, got hb={hb_m} m, hm={hm_m} m"
        )));
    }

    let log_fc = fc_mhz.log10();
    let log_hb = hb_m.log10();
    let a_db = T::of(69.55) + T::of(26.16) * log_fc
        - T::of(13.82) * log_hb
        - mobile_height_correction(log_fc, hm_m);
    let b_db_per_decade = T::of(44.9) - T::of(6.55) * log_hb;
    let c_db = match environment {
        Environment::Suburban => {
            let l = (fc_mhz / T::of(28.0)).log10();
            -(T::of(2.0) * l * l) - T::of(5.4)
        }
    };
    if b_db_per_decade <= T::zero() {
        return Err(Error::Domain(format!(
            "transmitter height {hb_m} m yields a non-increasing path loss slope"
        )));
    }
    Ok(PathLossCoefficients {
        a_db,
        b_db_per_decade,
        c_db,
    })
}

/// 3D Euclidean distance between two antenna positions given in meters, in km.
pub fn link_distance_km<T: Scalar>(a: Point3<T>, b: Point3<T>) -> T {
    a.distance(b) / T::of(1000.0)
}

/// `A + B log10(max(d_km, d_min_km)) + C`.
pub fn path_loss_db<T: Scalar>(c: &PathLossCoefficients<T>, d_km: T, d_min_km: T) -> Result<T> {
    if d_km.is_nan() || d_km <= T::zero() {
        return Err(Error::Domain(format!("link distance must be positive, got {d_km} km")));
    }
    let d = d_km.max(d_min_km);
    Ok(c.a_db + c.b_db_per_decade * d.log10() + c.c_db)
}

/// Received power in linear mW.
#[inline]
pub fn received_power_mw<T: Scalar>(tx_power_dbm: T, pl_db: T) -> T {
    T::of(10.0).powf((tx_power_dbm - pl_db) / T::of(10.0))
}

#[inline]
pub fn mw_to_dbm<T: Scalar>(p_mw: T) -> T {
    T::of(10.0) * p_mw.log10()
}
