//! Broadcast-ephemeris parameter set and secular extrapolation of the
//! orbital elements under the dominant J2 zonal perturbation.
//!
//! The model keeps `a` and `e` fixed, advances the node, perigee and mean
//! anomaly at constant rates, and applies an optional linear inclination
//! trend. Harmonic correction amplitudes ride along unchanged.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EphemerisError {
    #[error("semi-major axis {0} m must be positive")]
    NonPositiveAxis(f64),
    #[error("eccentricity {0} outside [0, 1)")]
    InvalidEccentricity(f64),
    #[error("extrapolation interval {0} s exceeds half a week")]
    HalfWeekExceeded(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("line {0}: expected key=value")]
    MissingSeparator(usize),
    #[error("unknown constant {0:?}")]
    UnknownKey(String),
    #[error("constant {key}: cannot parse {text:?} as a number")]
    BadValue { key: String, text: String },
}

/// Earth model constants used across orbit computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Equatorial radius, m.
    pub a_e: f64,
    /// Second zonal harmonic coefficient.
    pub j2: f64,
    /// Gravitational parameter, m^3/s^2.
    pub mu: f64,
    /// Earth rotation rate, rad/s.
    pub omega_earth: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            a_e: 6_378_137.0,
            j2: 108_263e-8,
            mu: 3.986_005e14,
            omega_earth: 7.292_115_146_7e-5,
        }
    }
}

impl PhysicalConstants {
    /// Apply overrides in `key=value` line format. Keys: `a_e`, `j2`, `mu`,
    /// `omega_earth`. Blank lines and `#` comments are ignored.
    pub fn with_overrides(text: &str) -> Result<Self, ConstantsError> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConstantsError::MissingSeparator(i + 1))?;
            let key = key.trim();
            let value = value.trim();
            let parsed: f64 = value.parse().map_err(|_| ConstantsError::BadValue {
                key: key.to_string(),
                text: value.to_string(),
            })?;
            match key {
                "a_e" => c.a_e = parsed,
                "j2" => c.j2 = parsed,
                "mu" => c.mu = parsed,
                "omega_earth" => c.omega_earth = parsed,
                other => return Err(ConstantsError::UnknownKey(other.to_string())),
            }
        }
        Ok(c)
    }
}

/// The sixteen broadcast orbit parameters: Kepler six, three secular-rate
/// fields and six harmonic correction amplitudes, referenced to `toe`.
///
/// `omegadot` is the broadcast node-rate field; it is carried for encoding
/// and parsing fidelity, while extrapolation uses the J2-derived rate so the
/// effect is never double counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroadcastEphemeris {
    /// Reference epoch, seconds of week.
    pub toe: f64,
    /// Semi-major axis, m.
    pub a: f64,
    /// Eccentricity.
    pub e: f64,
    /// Inclination at toe, rad.
    pub i0: f64,
    /// Right ascension of the ascending node at toe, rad.
    pub omega0: f64,
    /// Argument of perigee, rad.
    pub omega: f64,
    /// Mean anomaly at toe, rad.
    pub m0: f64,
    /// Mean motion correction, rad/s.
    pub deltan: f64,
    /// Broadcast node rate field, rad/s.
    pub omegadot: f64,
    /// Inclination rate, rad/s.
    pub idot: f64,
    pub cuc: f64,
    pub cus: f64,
    pub crc: f64,
    pub crs: f64,
    pub cic: f64,
    pub cis: f64,
}

/// Constant drift rates of the extrapolation model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRates {
    /// Corrected mean motion n0 + deltan, rad/s.
    pub n: f64,
    /// Node rate, rad/s.
    pub raan_rate: f64,
    /// Perigee rate, rad/s.
    pub argp_rate: f64,
    /// Mean anomaly drift excluding the mean motion, rad/s.
    pub mean_anomaly_rate: f64,
    /// Semi-latus rectum a (1 - e^2), m.
    pub p: f64,
}

/// Fold an angle into (-pi, pi]. Values already in range are returned
/// bit-identical, which keeps zero-interval extrapolation an exact identity.
pub fn normalize_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Corrected mean motion `sqrt(mu / a^3) + deltan`.
pub fn mean_motion(
    a: f64,
    deltan: f64,
    constants: &PhysicalConstants,
) -> Result<f64, EphemerisError> {
    if a <= 0.0 {
        return Err(EphemerisError::NonPositiveAxis(a));
    }
    Ok((constants.mu / (a * a * a)).sqrt() + deltan)
}

/// Constant J2 drift rates for the element set.
///
/// With `k = (3/2) a_e^2 J2 / p^2 (n0 + deltan)`:
/// node rate `-k cos i0`, perigee rate `-k (2 - 5/2 sin^2 i0)`, and mean
/// anomaly drift `-k (-1 + 3/2 sin^2 i0)(1 - e^2)`.
pub fn secular_rates(
    eph: &BroadcastEphemeris,
    constants: &PhysicalConstants,
) -> Result<SecularRates, EphemerisError> {
    if !(0.0..1.0).contains(&eph.e) {
        return Err(EphemerisError::InvalidEccentricity(eph.e));
    }
    let n = mean_motion(eph.a, eph.deltan, constants)?;
    let one_less_e2 = 1.0 - eph.e * eph.e;
    let p = eph.a * one_less_e2;
    let k = 1.5 * constants.a_e * constants.a_e * constants.j2 / (p * p) * n;
    let sin_i = eph.i0.sin();
    let sin2_i = sin_i * sin_i;
    Ok(SecularRates {
        n,
        raan_rate: -k * eph.i0.cos(),
        argp_rate: -k * (2.0 - 2.5 * sin2_i),
        mean_anomaly_rate: -k * (-1.0 + 1.5 * sin2_i) * one_less_e2,
        p,
    })
}

/// Advance the element set to time `t` (seconds of week scale of `toe`).
///
/// `a`, `e` and the harmonic amplitudes are copied unchanged; node, perigee
/// and mean anomaly advance at the [`secular_rates`] (the mean anomaly also
/// by the corrected mean motion); inclination follows `i0 + idot dt`. Output
/// angles are normalized to (-pi, pi] and the result is re-referenced to
/// `toe = t`. A zero interval returns the input bit-for-bit.
pub fn extrapolate(
    eph: &BroadcastEphemeris,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<BroadcastEphemeris, EphemerisError> {
    let dt = t - eph.toe;
    if dt == 0.0 {
        return Ok(*eph);
    }
    let rates = secular_rates(eph, constants)?;
    Ok(BroadcastEphemeris {
        toe: t,
        i0: normalize_angle(eph.i0 + eph.idot * dt),
        omega0: normalize_angle(eph.omega0 + rates.raan_rate * dt),
        omega: normalize_angle(eph.omega + rates.argp_rate * dt),
        m0: normalize_angle(eph.m0 + (rates.n + rates.mean_anomaly_rate) * dt),
        ..*eph
    })
}

/// [`extrapolate`], but rejecting intervals beyond half a week (302400 s).
pub fn extrapolate_strict(
    eph: &BroadcastEphemeris,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<BroadcastEphemeris, EphemerisError> {
    let dt = t - eph.toe;
    if dt.abs() > 302_400.0 {
        return Err(EphemerisError::HalfWeekExceeded(dt));
    }
    extrapolate(eph, t, constants)
}

/// One element-series sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementRow {
    pub t: f64,
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub omega0: f64,
    pub omega: f64,
    pub m0: f64,
}

/// Element time series from the record epoch to `to` inclusive, sampled
/// every `step` seconds. The first row is always the epoch itself, so a
/// target at or before the epoch yields a single identity row.
pub fn element_series(
    eph: &BroadcastEphemeris,
    to: f64,
    step: f64,
    constants: &PhysicalConstants,
) -> Result<Vec<ElementRow>, EphemerisError> {
    debug_assert!(step > 0.0);
    let mut rows = Vec::new();
    let mut k = 0u64;
    loop {
        let t = eph.toe + k as f64 * step;
        if k > 0 && t > to + 1e-9 {
            break;
        }
        let e = extrapolate(eph, t, constants)?;
        rows.push(ElementRow {
            t,
            a: e.a,
            e: e.e,
            i: e.i0,
            omega0: e.omega0,
            omega: e.omega,
            m0: e.m0,
        });
        k += 1;
    }
    Ok(rows)
}
