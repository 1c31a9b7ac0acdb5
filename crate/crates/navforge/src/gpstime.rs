//! Calendar to GPS time conversions.
//!
//! GPS time counts from the epoch 1980-01-06T00:00:00 (a Sunday). Within a
//! week, time is expressed as seconds of week in `[0, 604800)` or as a
//! Z-count, the number of 6-second intervals. This module converts a civil
//! date-time into those forms and derives the reference-time parameters
//! (`toc`/`toe`, their scaled 16-bit forms, and the data ages `IODC`/`IODE`)
//! that the navigation message carries.
//!
//! The day-number formula uses a plain 4-year leap rule, which agrees with
//! the Gregorian calendar from 1980 through 2099 but not beyond; the
//! supported window is therefore [1980-01-06, 2099-12-28].

use thiserror::Error;

/// Seconds in one GPS week.
pub const SECONDS_PER_WEEK: f64 = 604_800.0;

/// Z-count values run 0..=100799 and then wrap.
pub const Z_COUNT_MODULUS: u32 = 100_800;

/// Cumulative days before the start of each month (non-leap year).
const DAYS_BEFORE_MONTH: [u32; 12] = [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334];

const FIRST_DAY: (i32, u32, u32) = (1980, 1, 6);
const LAST_DAY: (i32, u32, u32) = (2099, 12, 28);

#[derive(Debug, Error, PartialEq)]
pub enum TimeError {
    /// Date outside [1980-01-06, 2099-12-28].
    #[error("date {year:04}-{month:02}-{day:02} outside supported range 1980-01-06..=2099-12-28")]
    DateOutOfRange { year: i32, month: u32, day: u32 },
    /// Not a valid calendar date-time (bad month, day, hour, minute or second).
    #[error("invalid date-time: {0}")]
    InvalidDate(String),
    /// Scaled reference time does not fit in 16 bits.
    #[error("scaled reference time {0} does not fit in 16 bits")]
    ScaleOverflow(i64),
    /// An observation time lies after its reference time.
    #[error("observation time {observation} exceeds reference time {reference}")]
    NegativeAge { reference: f64, observation: f64 },
}

fn is_leap_year(year: i32) -> bool {
    year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)
}

fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap_year(year) => 29,
        2 => 28,
        _ => 0,
    }
}

/// A civil date-time within the supported GPS window.
///
/// The seconds field is real-valued so that fractional RINEX epochs can be
/// carried exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalendarDateTime {
    year: i32,
    month: u32,
    day: u32,
    hour: u32,
    minute: u32,
    second: f64,
}

impl CalendarDateTime {
    pub fn new(
        year: i32,
        month: u32,
        day: u32,
        hour: u32,
        minute: u32,
        second: f64,
    ) -> Result<Self, TimeError> {
        if !(1..=12).contains(&month) {
            return Err(TimeError::InvalidDate(format!("month {month}")));
        }
        if day < 1 || day > days_in_month(year, month) {
            return Err(TimeError::InvalidDate(format!(
                "day {day} of {year:04}-{month:02}"
            )));
        }
        if hour > 23 {
            return Err(TimeError::InvalidDate(format!("hour {hour}")));
        }
        if minute > 59 {
            return Err(TimeError::InvalidDate(format!("minute {minute}")));
        }
        if !(0.0..60.0).contains(&second) {
            return Err(TimeError::InvalidDate(format!("second {second}")));
        }
        let ymd = (year, month, day);
        if ymd < FIRST_DAY || ymd > LAST_DAY {
            return Err(TimeError::DateOutOfRange { year, month, day });
        }
        Ok(Self {
            year,
            month,
            day,
            hour,
            minute,
            second,
        })
    }

    /// Midnight on the given date.
    pub fn from_date(year: i32, month: u32, day: u32) -> Result<Self, TimeError> {
        Self::new(year, month, day, 0, 0, 0.0)
    }

    pub fn year(&self) -> i32 {
        self.year
    }
    pub fn month(&self) -> u32 {
        self.month
    }
    pub fn day(&self) -> u32 {
        self.day
    }
    pub fn hour(&self) -> u32 {
        self.hour
    }
    pub fn minute(&self) -> u32 {
        self.minute
    }
    pub fn second(&self) -> f64 {
        self.second
    }

    /// Days elapsed since 1980-01-06.
    ///
    /// The year term counts 365 days per year; the leap-day count adds one
    /// day per started 4-year cycle, backed off by one while the current
    /// (leap) year has not yet passed February.
    pub fn day_number(&self) -> DayNumber {
        let years = self.year - 1980;
        let mut leap_days = years / 4 + 1;
        if years % 4 == 0 && self.month <= 2 {
            leap_days -= 1;
        }
        let d1 = years * 365
            + DAYS_BEFORE_MONTH[(self.month - 1) as usize] as i32
            + self.day as i32
            + leap_days
            - 6;
        debug_assert!(d1 >= 0);
        DayNumber(d1 as u32)
    }

    /// Seconds elapsed since the start of the current GPS week (Sunday 00:00:00).
    pub fn seconds_of_week(&self) -> GpsSecondsOfWeek {
        let d1 = self.day_number().0;
        let mut t = (d1 % 7) as f64 * 86_400.0
            + self.hour as f64 * 3_600.0
            + self.minute as f64 * 60.0
            + self.second;
        if t < 0.0 {
            t += 86_400.0;
        }
        GpsSecondsOfWeek(t)
    }

    /// Continuous seconds since the GPS epoch. Week-crossing intervals are
    /// differences of this value.
    pub fn seconds_since_epoch(&self) -> f64 {
        self.day_number().0 as f64 * 86_400.0
            + self.hour as f64 * 3_600.0
            + self.minute as f64 * 60.0
            + self.second
    }
}

/// Days since 1980-01-06; `value % 7 == 0` on any Sunday.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DayNumber(pub u32);

impl DayNumber {
    /// 0 = Sunday .. 6 = Saturday.
    pub fn weekday_index(&self) -> u32 {
        self.0 % 7
    }

    /// Full GPS week number (weeks are carried unwrapped).
    pub fn week(&self) -> u32 {
        self.0 / 7
    }
}

/// Seconds of week in `[0, 604800)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GpsSecondsOfWeek(pub f64);

impl GpsSecondsOfWeek {
    pub fn seconds(&self) -> f64 {
        self.0
    }
}

/// Count of 6-second intervals within the week, 0..=100799.
///
/// `from_seconds_of_week` yields the count of the *next* interval boundary:
/// at `t` seconds the value is `floor(t / 6) + 1`, wrapping to 0 at week end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZCount(u32);

impl ZCount {
    pub fn new(z: u32) -> Result<Self, TimeError> {
        if z >= Z_COUNT_MODULUS {
            return Err(TimeError::InvalidDate(format!("Z-count {z} out of range")));
        }
        Ok(Self(z))
    }

    pub fn from_seconds_of_week(t: GpsSecondsOfWeek) -> Self {
        debug_assert!((0.0..SECONDS_PER_WEEK).contains(&t.0));
        Self(((t.0 / 6.0).floor() as u32 + 1) % Z_COUNT_MODULUS)
    }

    pub fn value(&self) -> u32 {
        self.0
    }

    /// Next Z-count, 6 seconds later.
    pub fn next(&self) -> Self {
        Self((self.0 + 1) % Z_COUNT_MODULUS)
    }
}

/// Convention for the reference-time formula.
///
/// `Offset43` adds a fixed 43-second term to the computed epoch; `Standard`
/// leaves the epoch on the plain seconds-of-week grid, which divides cleanly
/// by the 16-second scaling step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TocConvention {
    #[default]
    Standard,
    Offset43,
}

/// Reference times and data ages for the first data block and the ephemeris.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeParameters {
    /// Clock reference time, seconds of week.
    pub toc: f64,
    /// Ephemeris reference time; equal to `toc` by construction.
    pub toe: f64,
    /// `floor(toc / 16)`, the 16-bit encoded form.
    pub toc_scaled: u32,
    /// `floor(toe / 16)`.
    pub toe_scaled: u32,
    /// Clock data age, seconds (0 until set from observation times).
    pub iodc: f64,
    /// Ephemeris data age, seconds.
    pub iode: f64,
    /// Hours the local time is ahead of GPS time.
    pub timezone: i32,
}

/// Final fit-observation times used to derive the data ages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationTimes {
    /// Last observation used for the clock-correction fit.
    pub last_clock_obs: f64,
    /// Last observation used for the ephemeris fit.
    pub last_ephemeris_obs: f64,
}

/// Compute `toc`/`toe` and their scaled forms for a local date-time.
///
/// The hour term is shifted by `timezone` to reach GPS time; a negative raw
/// value wraps forward by one day.
pub fn reference_times(
    date: &CalendarDateTime,
    timezone: i32,
    convention: TocConvention,
) -> Result<TimeParameters, TimeError> {
    let d1 = date.day_number().0;
    let mut toc = (d1 % 7) as f64 * 86_400.0
        + (date.hour() as f64 - timezone as f64) * 3_600.0
        + date.minute() as f64 * 60.0
        + date.second();
    if convention == TocConvention::Offset43 {
        toc += 43.0;
    }
    if toc < 0.0 {
        toc += 86_400.0;
    }
    let scaled = (toc / 16.0).floor() as i64;
    if !(0..1 << 16).contains(&scaled) {
        return Err(TimeError::ScaleOverflow(scaled));
    }
    Ok(TimeParameters {
        toc,
        toe: toc,
        toc_scaled: scaled as u32,
        toe_scaled: scaled as u32,
        iodc: 0.0,
        iode: 0.0,
        timezone,
    })
}

/// Data ages: time from the last fit observation to the reference time.
pub fn data_ages(toc: f64, toe: f64, obs: &ObservationTimes) -> Result<(f64, f64), TimeError> {
    if obs.last_clock_obs > toc {
        return Err(TimeError::NegativeAge {
            reference: toc,
            observation: obs.last_clock_obs,
        });
    }
    if obs.last_ephemeris_obs > toe {
        return Err(TimeError::NegativeAge {
            reference: toe,
            observation: obs.last_ephemeris_obs,
        });
    }
    Ok((toc - obs.last_clock_obs, toe - obs.last_ephemeris_obs))
}
