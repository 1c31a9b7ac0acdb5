//! Nominal 24-satellite constellation generation and satellite position
//! computation: Kepler solve, orbital-plane coordinates, then rotation into
//! the earth-fixed (or inertial) frame.

use thiserror::Error;

use crate::ephemeris::{
    extrapolate, normalize_angle, BroadcastEphemeris, EphemerisError, PhysicalConstants,
};

#[derive(Debug, Error, PartialEq)]
pub enum ConstellationError {
    #[error("Kepler iteration did not converge for M={m}, e={e}")]
    NoConvergence { m: f64, e: f64 },
    #[error(transparent)]
    Ephemeris(#[from] EphemerisError),
}

/// Layout of the nominal constellation: `planes` orbital planes separated by
/// `raan_spacing_deg`, each holding `sats_per_plane` satellites spaced
/// `in_plane_spacing_deg` apart, with consecutive planes phase shifted by
/// `phase_offset_per_plane_deg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstellationSpec {
    pub planes: u32,
    pub sats_per_plane: u32,
    pub raan_spacing_deg: f64,
    pub inclination_deg: f64,
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub in_plane_spacing_deg: f64,
    pub phase_offset_per_plane_deg: f64,
}

impl Default for ConstellationSpec {
    fn default() -> Self {
        Self {
            planes: 6,
            sats_per_plane: 4,
            raan_spacing_deg: 60.0,
            inclination_deg: 55.0,
            semi_major_axis: 26_560_000.0,
            eccentricity: 0.005,
            in_plane_spacing_deg: 90.0,
            phase_offset_per_plane_deg: 15.0,
        }
    }
}

/// Cartesian position in the earth-fixed frame, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcefPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EcefPosition {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl std::ops::Sub for EcefPosition {
    type Output = EcefPosition;
    fn sub(self, rhs: EcefPosition) -> EcefPosition {
        EcefPosition {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
            z: self.z - rhs.z,
        }
    }
}

/// Which longitude the ascending node is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeFrame {
    /// Subtract earth rotation: positions in the rotating earth-fixed frame.
    #[default]
    EarthFixed,
    /// Keep the node fixed in space; plane-membership checks are exact here.
    Inertial,
}

/// Solve Kepler's equation `E - e sin E = M` by Newton iteration from
/// `E0 = M`, to a residual below 1e-12 rad (at most 30 iterations).
pub fn kepler_solve(m: f64, e: f64) -> Result<f64, ConstellationError> {
    debug_assert!((0.0..1.0).contains(&e));
    let mut big_e = m;
    for _ in 0..30 {
        let residual = big_e - e * big_e.sin() - m;
        if residual.abs() < 1e-12 {
            return Ok(big_e);
        }
        big_e -= residual / (1.0 - e * big_e.cos());
    }
    Err(ConstellationError::NoConvergence { m, e })
}

/// One satellite of a generated constellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstellationSatellite {
    pub prn: u32,
    pub ephemeris: BroadcastEphemeris,
}

/// Build the ephemerides of the nominal constellation at reference time
/// `toe`. PRNs run 1..=24 in (plane, slot) order; all perturbation and
/// harmonic fields are zero.
pub fn generate_constellation(spec: &ConstellationSpec, toe: f64) -> Vec<ConstellationSatellite> {
    let mut sats = Vec::with_capacity((spec.planes * spec.sats_per_plane) as usize);
    let mut prn = 1;
    for plane in 0..spec.planes {
        let omega0 = normalize_angle((plane as f64 * spec.raan_spacing_deg).to_radians());
        let phase = plane as f64 * spec.phase_offset_per_plane_deg;
        for slot in 0..spec.sats_per_plane {
            let m0 =
                normalize_angle((slot as f64 * spec.in_plane_spacing_deg + phase).to_radians());
            sats.push(ConstellationSatellite {
                prn,
                ephemeris: BroadcastEphemeris {
                    toe,
                    a: spec.semi_major_axis,
                    e: spec.eccentricity,
                    i0: spec.inclination_deg.to_radians(),
                    omega0,
                    omega: 0.0,
                    m0,
                    deltan: 0.0,
                    omegadot: 0.0,
                    idot: 0.0,
                    cuc: 0.0,
                    cus: 0.0,
                    crc: 0.0,
                    crs: 0.0,
                    cic: 0.0,
                    cis: 0.0,
                },
            });
            prn += 1;
        }
    }
    sats
}

/// Satellite position at time `t` from its broadcast elements.
///
/// Extrapolates the elements to `t`, solves for the eccentric anomaly, forms
/// the true anomaly `f = atan2(sqrt(1-e^2) sin E, cos E - e)` and the
/// argument of latitude `phi = f + omega`, applies the harmonic corrections
/// (argument `2 phi`) to latitude argument, radius and inclination, and
/// rotates through the node. In the earth-fixed frame the node longitude is
/// `Omega(t) - omega_earth * t`, with `t` on the seconds-of-week scale.
pub fn position_from_elements(
    eph: &BroadcastEphemeris,
    t: f64,
    constants: &PhysicalConstants,
    frame: NodeFrame,
) -> Result<EcefPosition, ConstellationError> {
    let at_t = extrapolate(eph, t, constants)?;
    let big_e = kepler_solve(at_t.m0, at_t.e)?;
    let f = ((1.0 - at_t.e * at_t.e).sqrt() * big_e.sin()).atan2(big_e.cos() - at_t.e);
    let phi = f + at_t.omega;
    let (sin2phi, cos2phi) = (2.0 * phi).sin_cos();
    let du = at_t.cus * sin2phi + at_t.cuc * cos2phi;
    let dr = at_t.crs * sin2phi + at_t.crc * cos2phi;
    let di = at_t.cis * sin2phi + at_t.cic * cos2phi;

    let u = phi + du;
    let r = at_t.a * (1.0 - at_t.e * big_e.cos()) + dr;
    let i = at_t.i0 + di;

    let x_orb = r * u.cos();
    let y_orb = r * u.sin();
    let node = match frame {
        NodeFrame::EarthFixed => at_t.omega0 - constants.omega_earth * t,
        NodeFrame::Inertial => at_t.omega0,
    };
    let (sin_node, cos_node) = node.sin_cos();
    let (sin_i, cos_i) = i.sin_cos();
    Ok(EcefPosition {
        x: x_orb * cos_node - y_orb * cos_i * sin_node,
        y: x_orb * sin_node + y_orb * cos_i * cos_node,
        z: y_orb * sin_i,
    })
}
