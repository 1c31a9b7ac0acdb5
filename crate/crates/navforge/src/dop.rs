//! Position dilution of precision from user and satellite geometry.
//!
//! The geometry matrix G holds one row per visible satellite: the unit
//! line-of-sight vector from the user plus a clock column of ones. PDOP is
//! the square root of the position-block trace of `(G^T G)^-1`.

use thiserror::Error;

use crate::constellation::{
    generate_constellation, position_from_elements, ConstellationError, ConstellationSpec,
    EcefPosition, NodeFrame,
};
use crate::ephemeris::PhysicalConstants;

/// Reference-ellipsoid flattening used for the geodetic conversion.
pub const WGS84_FLATTENING: f64 = 1.0 / 298.257_223_563;

/// Condition-number threshold above which the normal matrix is treated as
/// singular.
const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Error, PartialEq)]
pub enum DopError {
    #[error("{0} usable satellites; at least 4 required")]
    InsufficientSatellites(usize),
    #[error("satellite geometry is numerically singular")]
    SingularGeometry,
    #[error("step must be positive, got {0}")]
    BadStep(f64),
    #[error("duration must be non-negative, got {0}")]
    NegativeDuration(f64),
    #[error(transparent)]
    Propagation(#[from] ConstellationError),
}

/// Geodetic user position on the reference ellipsoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodeticPosition {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub height_m: f64,
}

/// Convert geodetic coordinates to the earth-fixed frame using the
/// ellipsoid (equatorial radius from the physical constants,
/// [`WGS84_FLATTENING`]).
pub fn geodetic_to_ecef(pos: &GeodeticPosition, constants: &PhysicalConstants) -> EcefPosition {
    let e2 = WGS84_FLATTENING * (2.0 - WGS84_FLATTENING);
    let (sin_lat, cos_lat) = pos.lat_deg.to_radians().sin_cos();
    let (sin_lon, cos_lon) = pos.lon_deg.to_radians().sin_cos();
    let n = constants.a_e / (1.0 - e2 * sin_lat * sin_lat).sqrt();
    EcefPosition {
        x: (n + pos.height_m) * cos_lat * cos_lon,
        y: (n + pos.height_m) * cos_lat * sin_lon,
        z: (n * (1.0 - e2) + pos.height_m) * sin_lat,
    }
}

/// Indices of the satellites whose elevation above the user's local horizon
/// (geocentric up direction) exceeds `mask_deg`.
pub fn visible_satellites(
    user: &EcefPosition,
    sats: &[EcefPosition],
    mask_deg: f64,
) -> Vec<usize> {
    let r_user = user.norm();
    debug_assert!(r_user > 6.3e6, "user must be near the earth surface");
    let up = [user.x / r_user, user.y / r_user, user.z / r_user];
    let sin_mask = mask_deg.to_radians().sin();
    sats.iter()
        .enumerate()
        .filter_map(|(i, sat)| {
            let d = *sat - *user;
            let range = d.norm();
            if range == 0.0 {
                return None;
            }
            let sin_el = (d.x * up[0] + d.y * up[1] + d.z * up[2]) / range;
            (sin_el > sin_mask).then_some(i)
        })
        .collect()
}

fn norm1(m: &[[f64; 4]; 4]) -> f64 {
    (0..4)
        .map(|c| (0..4).map(|r| m[r][c].abs()).sum())
        .fold(0.0, f64::max)
}

/// Gauss-Jordan inversion with partial pivoting; `None` on a zero pivot.
fn invert4(m: &[[f64; 4]; 4]) -> Option<[[f64; 4]; 4]> {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let pivot_row = (col..4).max_by(|&r, &s| {
            a[r][col].abs().total_cmp(&a[s][col].abs())
        })?;
        if a[pivot_row][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col];
        for j in 0..4 {
            a[col][j] /= pivot;
            inv[col][j] /= pivot;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..4 {
                a[row][j] -= factor * a[col][j];
                inv[row][j] -= factor * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// PDOP for a set of (already visibility-filtered) satellite positions.
pub fn pdop(user: &EcefPosition, sats: &[EcefPosition]) -> Result<f64, DopError> {
    let rows: Vec<[f64; 4]> = sats
        .iter()
        .filter_map(|sat| {
            let d = *sat - *user;
            let range = d.norm();
            (range > 0.0).then(|| [d.x / range, d.y / range, d.z / range, 1.0])
        })
        .collect();
    if rows.len() < 4 {
        return Err(DopError::InsufficientSatellites(rows.len()));
    }
    let mut normal = [[0.0; 4]; 4];
    for row in &rows {
        for i in 0..4 {
            for j in 0..4 {
                normal[i][j] += row[i] * row[j];
            }
        }
    }
    let inv = invert4(&normal).ok_or(DopError::SingularGeometry)?;
    let condition = norm1(&normal) * norm1(&inv);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(DopError::SingularGeometry);
    }
    let trace = inv[0][0] + inv[1][1] + inv[2][2];
    if trace.is_nan() || trace <= 0.0 {
        return Err(DopError::SingularGeometry);
    }
    Ok(trace.sqrt())
}

/// One sample of a PDOP time series. `pdop` is absent when the sample's
/// geometry was insufficient or singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopResult {
    pub t: f64,
    pub visible_count: usize,
    pub pdop: Option<f64>,
}

/// PDOP of the nominal constellation as seen from `user`, sampled every
/// `step` seconds over `[t0, t0 + duration]`.
///
/// The constellation is generated with its reference epoch at `t0` and
/// propagated to each sample time. Per-sample geometry failures are recorded
/// in the row rather than aborting the series.
pub fn pdop_series(
    spec: &ConstellationSpec,
    user: &GeodeticPosition,
    t0: f64,
    duration: f64,
    step: f64,
    mask_deg: f64,
    constants: &PhysicalConstants,
) -> Result<Vec<DopResult>, DopError> {
    if step.is_nan() || step <= 0.0 {
        return Err(DopError::BadStep(step));
    }
    if duration < 0.0 {
        return Err(DopError::NegativeDuration(duration));
    }
    let sats = generate_constellation(spec, t0);
    let user_ecef = geodetic_to_ecef(user, constants);
    let samples = (duration / step).floor() as u64;
    let mut out = Vec::with_capacity(samples as usize + 1);
    for k in 0..=samples {
        let t = t0 + k as f64 * step;
        let positions = sats
            .iter()
            .map(|s| position_from_elements(&s.ephemeris, t, constants, NodeFrame::EarthFixed))
            .collect::<Result<Vec<_>, _>>()?;
        let vis = visible_satellites(&user_ecef, &positions, mask_deg);
        let chosen: Vec<EcefPosition> = vis.iter().map(|&i| positions[i]).collect();
        out.push(DopResult {
            t,
            visible_count: chosen.len(),
            pdop: pdop(&user_ecef, &chosen).ok(),
        });
    }
    Ok(out)
}
