//! Key-parameter generation for GPS navigation data, plus the tooling needed
//! to validate it against real broadcast ephemerides.
//!
//! The crate covers the full path from a civil date to a transmittable
//! navigation bitstream:
//!
//! - [`gpstime`]: calendar to GPS time conversions: day number, seconds of
//!   week, Z-count, reference epochs and data ages.
//! - [`parity`]: the 6 check bits of each 30-bit word, from a fixed 6x24
//!   mod-2 check matrix.
//! - [`framing`]: TLM/HOW words, field placement, subframe/frame/superframe
//!   assembly and bitstream serialization.
//! - [`clock`]: quadratic satellite clock model and re-referencing of the
//!   polynomial to a new epoch.
//! - [`ephemeris`]: broadcast ephemeris parameters and their secular
//!   extrapolation under the second zonal harmonic.
//! - [`rinex`]: RINEX 2 navigation file parsing and serialization.
//! - [`constellation`]: nominal 24-satellite constellation and satellite
//!   position computation (Kepler solve, orbital plane, earth-fixed frame).
//! - [`dop`]: visibility and position dilution of precision.

pub mod clock;
pub mod constellation;
pub mod dop;
pub mod ephemeris;
pub mod framing;
pub mod gpstime;
pub mod parity;
pub mod rinex;
