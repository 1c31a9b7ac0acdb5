//! RINEX 2 navigation-file parsing and serialization.
//!
//! The format is strictly positional: each record occupies 8 lines, every
//! numeric field sits in one of the 19-character column slices 4-22, 23-41,
//! 42-60 or 61-79 (1-based, inclusive), and reals use a Fortran 'D' exponent
//! marker. Parsing never splits on whitespace, so a value keeps its meaning
//! regardless of internal padding, and a field shifted out of its columns is
//! a detectable error rather than a silent reinterpretation.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ephemeris::BroadcastEphemeris;
use crate::gpstime::{CalendarDateTime, TimeError};

/// 0-based start offsets of the four 19-character value slices.
const FIELD_STARTS: [usize; 4] = [3, 22, 41, 60];
const FIELD_WIDTH: usize = 19;
const LINES_PER_RECORD: usize = 8;
const HEADER_END_MARKER: &str = "END OF HEADER";

#[derive(Debug, Error, PartialEq)]
pub enum ValueError {
    #[error("field is blank")]
    MissingValue,
    #[error("cannot parse {0:?} as a number")]
    MalformedNumber(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum RinexError {
    #[error("no END OF HEADER line found")]
    MissingHeaderEnd,
    #[error("body has {0} lines, not a multiple of 8")]
    TruncatedRecord(usize),
    #[error("line {line}: malformed epoch: {reason}")]
    MalformedEpoch { line: usize, reason: String },
    #[error("line {line}, columns {col_start}-{col_end} ({field}): {source}")]
    Value {
        line: usize,
        col_start: usize,
        col_end: usize,
        field: &'static str,
        source: ValueError,
    },
    #[error("line {line}: {source}")]
    Time {
        line: usize,
        source: TimeError,
    },
}

/// One navigation record: epoch and clock triple from the first line, then
/// 28 broadcast-orbit values from lines 2 through 8 (38 fields in all,
/// counting the six epoch components and the PRN).
///
/// The clock triple is named `af0`/`af1`/`af2` here; these are the same
/// coefficients the clock module calls `a0`/`a1`/`a2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NavRecord {
    pub prn: u32,
    pub epoch: CalendarDateTime,
    pub af0: f64,
    pub af1: f64,
    pub af2: f64,
    pub iode: f64,
    pub crs: f64,
    pub deltan: f64,
    pub m0: f64,
    pub cuc: f64,
    pub e: f64,
    pub cus: f64,
    pub sqrta: f64,
    pub toe: f64,
    pub cic: f64,
    pub omega0: f64,
    pub cis: f64,
    pub i0: f64,
    pub crc: f64,
    pub omega: f64,
    pub omegadot: f64,
    pub idot: f64,
    pub codes_l2: f64,
    pub week: f64,
    pub l2p_flag: f64,
    pub accuracy: f64,
    pub health: f64,
    pub tgd: f64,
    pub iodc: f64,
    pub transmission_time: f64,
    pub spare1: f64,
    pub spare2: f64,
    pub spare3: f64,
}

impl NavRecord {
    /// View the orbital fields as a broadcast ephemeris (`a = sqrta^2`).
    pub fn to_broadcast_ephemeris(&self) -> BroadcastEphemeris {
        BroadcastEphemeris {
            toe: self.toe,
            a: self.sqrta * self.sqrta,
            e: self.e,
            i0: self.i0,
            omega0: self.omega0,
            omega: self.omega,
            m0: self.m0,
            deltan: self.deltan,
            omegadot: self.omegadot,
            idot: self.idot,
            cuc: self.cuc,
            cus: self.cus,
            crc: self.crc,
            crs: self.crs,
            cic: self.cic,
            cis: self.cis,
        }
    }
}

/// A parsed navigation file: raw header lines (through the END OF HEADER
/// line) and the records in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct NavFile {
    pub header_lines: Vec<String>,
    pub records: Vec<NavRecord>,
}

/// 1-based index of the first line containing the END OF HEADER marker.
pub fn find_header_end(text: &str) -> Result<usize, RinexError> {
    text.lines()
        .position(|line| line.contains(HEADER_END_MARKER))
        .map(|i| i + 1)
        .ok_or(RinexError::MissingHeaderEnd)
}

/// Parse one 19-character column slice as a real number.
///
/// 'D'/'d' exponent markers are accepted as 'E'; surrounding blanks are
/// ignored; an all-blank slice is [`ValueError::MissingValue`].
pub fn parse_real(field: &str) -> Result<f64, ValueError> {
    let trimmed = field.trim();
    if trimmed.is_empty() {
        return Err(ValueError::MissingValue);
    }
    let normalized: String = trimmed
        .chars()
        .map(|c| if c == 'D' || c == 'd' { 'E' } else { c })
        .collect();
    normalized
        .parse()
        .map_err(|_| ValueError::MalformedNumber(trimmed.to_string()))
}

fn slice_cols(line: &str, start: usize, width: usize) -> String {
    line.chars().skip(start).take(width).collect()
}

fn parse_epoch_int(line: &str, start: usize, width: usize, line_no: usize) -> Result<i64, RinexError> {
    let s = slice_cols(line, start, width);
    s.trim()
        .parse()
        .map_err(|_| RinexError::MalformedEpoch {
            line: line_no,
            reason: format!("cannot read integer from columns {}-{}: {s:?}", start + 1, start + width),
        })
}

/// Parse the first line of a record: PRN in columns 1-2, two-digit year in
/// 3-5, then month, day, hour and minute in 3-character columns and seconds
/// in columns 19-22. Years above 79 belong to 1900, the rest to 2000.
pub fn parse_epoch(line: &str, line_no: usize) -> Result<(u32, CalendarDateTime), RinexError> {
    if line.chars().count() < 22 {
        return Err(RinexError::MalformedEpoch {
            line: line_no,
            reason: format!("epoch line has fewer than 22 columns: {line:?}"),
        });
    }
    let prn = parse_epoch_int(line, 0, 2, line_no)?;
    let yy = parse_epoch_int(line, 2, 3, line_no)?;
    let month = parse_epoch_int(line, 5, 3, line_no)?;
    let day = parse_epoch_int(line, 8, 3, line_no)?;
    let hour = parse_epoch_int(line, 11, 3, line_no)?;
    let minute = parse_epoch_int(line, 14, 3, line_no)?;
    let sec_text = slice_cols(line, 18, 4);
    let second: f64 = sec_text
        .trim()
        .parse()
        .map_err(|_| RinexError::MalformedEpoch {
            line: line_no,
            reason: format!("cannot read seconds from columns 19-22: {sec_text:?}"),
        })?;
    let year = if yy > 79 { 1900 + yy } else { 2000 + yy };
    let epoch = CalendarDateTime::new(
        year as i32,
        month as u32,
        day as u32,
        hour as u32,
        minute as u32,
        second,
    )
    .map_err(|source| RinexError::Time {
        line: line_no,
        source,
    })?;
    Ok((prn as u32, epoch))
}

fn value_field(
    line: &str,
    line_no: usize,
    slot: usize,
    field: &'static str,
) -> Result<f64, RinexError> {
    let start = FIELD_STARTS[slot];
    parse_real(&slice_cols(line, start, FIELD_WIDTH)).map_err(|source| RinexError::Value {
        line: line_no,
        col_start: start + 1,
        col_end: start + FIELD_WIDTH,
        field,
        source,
    })
}

/// Like [`value_field`], but a blank slice reads as 0.0. Only the designated
/// spare slots at the end of a record get this treatment.
fn spare_field(
    line: &str,
    line_no: usize,
    slot: usize,
    field: &'static str,
) -> Result<f64, RinexError> {
    match value_field(line, line_no, slot, field) {
        Err(RinexError::Value {
            source: ValueError::MissingValue,
            ..
        }) => Ok(0.0),
        other => other,
    }
}

/// Parse a complete navigation file.
///
/// The body (everything after the END OF HEADER line, minus trailing blank
/// lines) must be an exact multiple of 8 lines.
pub fn parse_nav_file(text: &str) -> Result<NavFile, RinexError> {
    let header_end = find_header_end(text)?;
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    let header_lines = lines[..header_end].iter().map(|l| l.to_string()).collect();

    let mut body: &[&str] = &lines[header_end..];
    while let [rest @ .., last] = body {
        if last.trim().is_empty() {
            body = rest;
        } else {
            break;
        }
    }
    if !body.len().is_multiple_of(LINES_PER_RECORD) {
        return Err(RinexError::TruncatedRecord(body.len()));
    }

    let mut records = Vec::with_capacity(body.len() / LINES_PER_RECORD);
    for (chunk_index, chunk) in body.chunks(LINES_PER_RECORD).enumerate() {
        // 1-based line number of the chunk's first line within the file.
        let base = header_end + chunk_index * LINES_PER_RECORD + 1;
        let (prn, epoch) = parse_epoch(chunk[0], base)?;
        records.push(NavRecord {
            prn,
            epoch,
            af0: value_field(chunk[0], base, 1, "af0")?,
            af1: value_field(chunk[0], base, 2, "af1")?,
            af2: value_field(chunk[0], base, 3, "af2")?,
            iode: value_field(chunk[1], base + 1, 0, "iode")?,
            crs: value_field(chunk[1], base + 1, 1, "crs")?,
            deltan: value_field(chunk[1], base + 1, 2, "deltan")?,
            m0: value_field(chunk[1], base + 1, 3, "m0")?,
            cuc: value_field(chunk[2], base + 2, 0, "cuc")?,
            e: value_field(chunk[2], base + 2, 1, "e")?,
            cus: value_field(chunk[2], base + 2, 2, "cus")?,
            sqrta: value_field(chunk[2], base + 2, 3, "sqrta")?,
            toe: value_field(chunk[3], base + 3, 0, "toe")?,
            cic: value_field(chunk[3], base + 3, 1, "cic")?,
            omega0: value_field(chunk[3], base + 3, 2, "omega0")?,
            cis: value_field(chunk[3], base + 3, 3, "cis")?,
            i0: value_field(chunk[4], base + 4, 0, "i0")?,
            crc: value_field(chunk[4], base + 4, 1, "crc")?,
            omega: value_field(chunk[4], base + 4, 2, "omega")?,
            omegadot: value_field(chunk[4], base + 4, 3, "omegadot")?,
            idot: value_field(chunk[5], base + 5, 0, "idot")?,
            codes_l2: value_field(chunk[5], base + 5, 1, "codes_l2")?,
            week: value_field(chunk[5], base + 5, 2, "week")?,
            l2p_flag: value_field(chunk[5], base + 5, 3, "l2p_flag")?,
            accuracy: value_field(chunk[6], base + 6, 0, "accuracy")?,
            health: value_field(chunk[6], base + 6, 1, "health")?,
            tgd: value_field(chunk[6], base + 6, 2, "tgd")?,
            iodc: value_field(chunk[6], base + 6, 3, "iodc")?,
            transmission_time: value_field(chunk[7], base + 7, 0, "transmission_time")?,
            spare1: spare_field(chunk[7], base + 7, 1, "spare1")?,
            spare2: spare_field(chunk[7], base + 7, 2, "spare2")?,
            spare3: spare_field(chunk[7], base + 7, 3, "spare3")?,
        });
    }
    Ok(NavFile {
        header_lines,
        records,
    })
}

/// Format a real in the 19-character 'D' style: `-0.ddddddddddddD-ee`.
///
/// Twelve mantissa digits are enough for any value that was itself parsed
/// from this format to survive a serialize/parse cycle bit-exactly.
pub fn format_d19(v: f64) -> String {
    if v == 0.0 {
        return " 0.000000000000D+00".to_string();
    }
    let sign = if v < 0.0 { '-' } else { ' ' };
    let sci = format!("{:.11e}", v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("numeric exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 12);
    let shifted = exp + 1;
    let esign = if shifted < 0 { '-' } else { '+' };
    format!("{sign}0.{digits}D{esign}{:02}", shifted.abs())
}

fn epoch_line(record: &NavRecord) -> String {
    let e = &record.epoch;
    let mut line = format!(
        "{:2}{:3}{:3}{:3}{:3}{:3}{:5.1}",
        record.prn,
        e.year() % 100,
        e.month(),
        e.day(),
        e.hour(),
        e.minute(),
        e.second(),
    );
    for v in [record.af0, record.af1, record.af2] {
        line.push_str(&format_d19(v));
    }
    line
}

fn value_line(values: [f64; 4]) -> String {
    let mut line = String::with_capacity(3 + 4 * FIELD_WIDTH);
    line.push_str("   ");
    for v in values {
        line.push_str(&format_d19(v));
    }
    line
}

/// Serialize a navigation file; header lines are reproduced verbatim.
///
/// `parse(serialize(f))` equals `f` field for field.
pub fn serialize_nav_file(file: &NavFile) -> String {
    let mut out = String::new();
    for line in &file.header_lines {
        let _ = writeln!(out, "{line}");
    }
    for r in &file.records {
        let _ = writeln!(out, "{}", epoch_line(r));
        for values in [
            [r.iode, r.crs, r.deltan, r.m0],
            [r.cuc, r.e, r.cus, r.sqrta],
            [r.toe, r.cic, r.omega0, r.cis],
            [r.i0, r.crc, r.omega, r.omegadot],
            [r.idot, r.codes_l2, r.week, r.l2p_flag],
            [r.accuracy, r.health, r.tgd, r.iodc],
            [r.transmission_time, r.spare1, r.spare2, r.spare3],
        ] {
            let _ = writeln!(out, "{}", value_line(values));
        }
    }
    out
}
