//! Command-line front end tying the pipeline together: parse RINEX
//! navigation files, extrapolate orbital elements, assemble navigation
//! message bitstreams, and emit constellation/PDOP validation CSVs.
//!
//! Exit codes: 0 success, 1 usage, 2 parse/encode input error, 3 I/O,
//! 4 unknown PRN, 5 field overflow while encoding.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use navforge::clock::{rereference, ClockInit, RereferenceMode};
use navforge::constellation::{
    generate_constellation, position_from_elements, ConstellationSpec, NodeFrame,
};
use navforge::dop::{pdop_series, DopError, GeodeticPosition};
use navforge::ephemeris::{element_series, PhysicalConstants};
use navforge::framing::{
    assemble_superframe, serialize_bits, BitstreamFormat, FieldValues, FramingError,
    LayoutRegistry,
};
use navforge::gpstime::{reference_times, CalendarDateTime, TocConvention, ZCount};
use navforge::rinex::{parse_nav_file, NavRecord};

#[derive(Parser)]
#[command(name = "navforge", version, about = "GPS navigation message toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// '0'/'1' text, one line per subframe.
    Bits,
    /// Packed bytes, MSB first.
    Bin,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClockMode {
    /// Re-center the quadratic exactly (drift term gains 2 a2 delta).
    Exact,
    /// Drop the factor 2 in the drift update.
    Simplified,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FrameChoice {
    EarthFixed,
    Inertial,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a RINEX 2 navigation file and dump all records as CSV.
    ParseRinex {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Extrapolate one record's orbital elements to a target epoch.
    Extrapolate {
        input: PathBuf,
        /// Satellite PRN selecting the record (first match wins).
        #[arg(long)]
        prn: u32,
        /// Target epoch, YYYY-MM-DDThh:mm:ss.
        #[arg(long)]
        to: String,
        /// Sample spacing in seconds.
        #[arg(long, default_value_t = 300.0)]
        step: f64,
        /// Hours local time is ahead of GPS time for the target epoch.
        #[arg(long, default_value_t = 0)]
        timezone: i32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Assemble a navigation-message bitstream.
    GenNav {
        /// RINEX navigation file supplying clock and orbit fields.
        input: Option<PathBuf>,
        /// Use built-in nominal parameters instead of an input file.
        #[arg(long, conflicts_with = "input")]
        synthetic: bool,
        /// Record selector when reading a file (default: first record).
        #[arg(long)]
        prn: Option<u32>,
        /// Transmission start epoch, YYYY-MM-DDThh:mm:ss.
        #[arg(long, default_value = "2011-06-26T00:00:00")]
        start: String,
        /// Hours local time is ahead of GPS time.
        #[arg(long, default_value_t = 0)]
        timezone: i32,
        /// Number of 1500-bit frames to emit.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=25))]
        frames: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Bits)]
        format: OutputFormat,
        /// Add the fixed 43 s term to the reference time.
        #[arg(long)]
        toc_offset_43: bool,
        /// Derive a0/a1/a2 by re-referencing from this system start time
        /// (seconds of week) instead of using them directly.
        #[arg(long)]
        clock_start: Option<f64>,
        #[arg(long, value_enum, default_value_t = ClockMode::Exact)]
        clock_mode: ClockMode,
        /// Clock bias override, seconds.
        #[arg(long)]
        a0: Option<f64>,
        /// Clock drift override, s/s.
        #[arg(long)]
        a1: Option<f64>,
        /// Clock drift-rate override, s/s^2.
        #[arg(long)]
        a2: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Emit satellite positions of the nominal constellation as CSV.
    Constellation {
        /// First sample time, seconds of week.
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 0.0)]
        duration: f64,
        #[arg(long, default_value_t = 300.0)]
        step: f64,
        #[arg(long, value_enum, default_value_t = FrameChoice::EarthFixed)]
        frame: FrameChoice,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compute a PDOP time series for a ground user.
    Dop {
        /// Geodetic latitude, degrees.
        #[arg(long, default_value_t = 30.0)]
        lat: f64,
        /// Geodetic longitude, degrees.
        #[arg(long, default_value_t = 120.0)]
        lon: f64,
        /// Height above the ellipsoid, meters.
        #[arg(long, default_value_t = 0.0)]
        height: f64,
        /// Elevation mask, degrees.
        #[arg(long, default_value_t = 5.0)]
        mask: f64,
        /// Start epoch, YYYY-MM-DDThh:mm:ss.
        #[arg(long, default_value = "2011-06-26T00:00:00")]
        start: String,
        #[arg(long, default_value_t = 86_400.0)]
        duration: f64,
        #[arg(long, default_value_t = 300.0)]
        step: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum AppError {
    Usage(String),
    Parse(String),
    Io(String),
    UnknownPrn(u32),
    FieldOverflow(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Parse(_) => 2,
            AppError::Io(_) => 3,
            AppError::UnknownPrn(_) => 4,
            AppError::FieldOverflow(_) => 5,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Parse(m) => write!(f, "parse error: {m}"),
            AppError::Io(m) => write!(f, "i/o error: {m}"),
            AppError::UnknownPrn(p) => write!(f, "no record for PRN {p}"),
            AppError::FieldOverflow(m) => write!(f, "encoding overflow: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("navforge: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::ParseRinex { input, output } => cmd_parse_rinex(&input, &output),
        Command::Extrapolate {
            input,
            prn,
            to,
            step,
            timezone,
            output,
        } => cmd_extrapolate(&input, prn, &to, step, timezone, &output),
        Command::GenNav {
            input,
            synthetic,
            prn,
            start,
            timezone,
            frames,
            format,
            toc_offset_43,
            clock_start,
            clock_mode,
            a0,
            a1,
            a2,
            output,
        } => {
            let cfg = GenNavConfig {
                input,
                synthetic,
                prn,
                start,
                timezone,
                frames: frames as usize,
                format,
                toc_offset_43,
                clock_start,
                clock_mode,
                a0,
                a1,
                a2,
                output,
            };
            cmd_gen_nav(cfg)
        }
        Command::Constellation {
            t0,
            duration,
            step,
            frame,
            output,
        } => cmd_constellation(t0, duration, step, frame, &output),
        Command::Dop {
            lat,
            lon,
            height,
            mask,
            start,
            duration,
            step,
            output,
        } => cmd_dop(lat, lon, height, mask, &start, duration, step, &output),
    }
}

/// Write through a temp file and rename, so a failed run never leaves a
/// truncated artifact behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    let io_err = |e: std::io::Error| AppError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| AppError::Io(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

fn read_input(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))
}

/// Physical constants, with overrides from the file named by
/// NAVFORGE_CONSTANTS when that variable is set.
fn load_constants() -> Result<PhysicalConstants, AppError> {
    match std::env::var_os("NAVFORGE_CONSTANTS") {
        None => Ok(PhysicalConstants::default()),
        Some(path) => {
            let path = PathBuf::from(path);
            let text = read_input(&path)?;
            PhysicalConstants::with_overrides(&text)
                .map_err(|e| AppError::Parse(format!("{}: {e}", path.display())))
        }
    }
}

/// Parse a YYYY-MM-DDThh:mm:ss epoch flag (seconds may be fractional).
fn parse_epoch_flag(text: &str) -> Result<CalendarDateTime, AppError> {
    let bad = || AppError::Usage(format!("epoch {text:?} is not YYYY-MM-DDThh:mm:ss"));
    let (date, time) = text.split_once('T').ok_or_else(bad)?;
    let date: Vec<&str> = date.split('-').collect();
    let time: Vec<&str> = time.split(':').collect();
    if date.len() != 3 || time.len() != 3 {
        return Err(bad());
    }
    let year: i32 = date[0].parse().map_err(|_| bad())?;
    let month: u32 = date[1].parse().map_err(|_| bad())?;
    let day: u32 = date[2].parse().map_err(|_| bad())?;
    let hour: u32 = time[0].parse().map_err(|_| bad())?;
    let minute: u32 = time[1].parse().map_err(|_| bad())?;
    let second: f64 = time[2].parse().map_err(|_| bad())?;
    CalendarDateTime::new(year, month, day, hour, minute, second)
        .map_err(|e| AppError::Usage(format!("epoch {text:?}: {e}")))
}

const RECORD_COLUMNS: [&str; 38] = [
    "prn",
    "year",
    "month",
    "day",
    "hour",
    "minute",
    "second",
    "af0",
    "af1",
    "af2",
    "iode",
    "crs",
    "deltan",
    "m0",
    "cuc",
    "e",
    "cus",
    "sqrta",
    "toe",
    "cic",
    "omega0",
    "cis",
    "i0",
    "crc",
    "omega",
    "omegadot",
    "idot",
    "codes_l2",
    "week",
    "l2p_flag",
    "accuracy",
    "health",
    "tgd",
    "iodc",
    "transmission_time",
    "spare1",
    "spare2",
    "spare3",
];

fn record_csv_row(r: &NavRecord) -> String {
    let mut fields: Vec<String> = vec![
        r.prn.to_string(),
        r.epoch.year().to_string(),
        r.epoch.month().to_string(),
        r.epoch.day().to_string(),
        r.epoch.hour().to_string(),
        r.epoch.minute().to_string(),
        r.epoch.second().to_string(),
    ];
    for v in [
        r.af0,
        r.af1,
        r.af2,
        r.iode,
        r.crs,
        r.deltan,
        r.m0,
        r.cuc,
        r.e,
        r.cus,
        r.sqrta,
        r.toe,
        r.cic,
        r.omega0,
        r.cis,
        r.i0,
        r.crc,
        r.omega,
        r.omegadot,
        r.idot,
        r.codes_l2,
        r.week,
        r.l2p_flag,
        r.accuracy,
        r.health,
        r.tgd,
        r.iodc,
        r.transmission_time,
        r.spare1,
        r.spare2,
        r.spare3,
    ] {
        fields.push(v.to_string());
    }
    fields.join(",")
}

fn cmd_parse_rinex(input: &Path, output: &Path) -> Result<(), AppError> {
    let text = read_input(input)?;
    let file = parse_nav_file(&text).map_err(|e| AppError::Parse(e.to_string()))?;
    let mut csv = String::new();
    csv.push_str(&RECORD_COLUMNS.join(","));
    csv.push('\n');
    for record in &file.records {
        csv.push_str(&record_csv_row(record));
        csv.push('\n');
    }
    write_atomic(output, csv.as_bytes())
}

fn find_record(records: &[NavRecord], prn: u32) -> Result<&NavRecord, AppError> {
    records
        .iter()
        .find(|r| r.prn == prn)
        .ok_or(AppError::UnknownPrn(prn))
}

fn cmd_extrapolate(
    input: &Path,
    prn: u32,
    to: &str,
    step: f64,
    timezone: i32,
    output: &Path,
) -> Result<(), AppError> {
    if step.is_nan() || step <= 0.0 {
        return Err(AppError::Usage(format!("step must be positive, got {step}")));
    }
    let constants = load_constants()?;
    let text = read_input(input)?;
    let file = parse_nav_file(&text).map_err(|e| AppError::Parse(e.to_string()))?;
    let record = find_record(&file.records, prn)?;
    let target = parse_epoch_flag(to)?;
    let tz_shift = timezone as f64 * 3600.0;
    // Keep the record's seconds-of-week scale; the target may sit in a
    // later week, so step through continuous seconds.
    let span = (target.seconds_since_epoch() - tz_shift)
        - record.epoch.seconds_since_epoch();
    let eph = record.to_broadcast_ephemeris();
    let rows = element_series(&eph, eph.toe + span, step, &constants)
        .map_err(|e| AppError::Parse(e.to_string()))?;
    let mut csv = String::from("t,a,e,i,omega0,omega,m0\n");
    for row in rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.t, row.a, row.e, row.i, row.omega0, row.omega, row.m0
        ));
    }
    write_atomic(output, csv.as_bytes())
}

struct GenNavConfig {
    input: Option<PathBuf>,
    synthetic: bool,
    prn: Option<u32>,
    start: String,
    timezone: i32,
    frames: usize,
    format: OutputFormat,
    toc_offset_43: bool,
    clock_start: Option<f64>,
    clock_mode: ClockMode,
    a0: Option<f64>,
    a1: Option<f64>,
    a2: Option<f64>,
    output: PathBuf,
}

fn synthetic_payload(toc: f64) -> FieldValues {
    let mut payload = BTreeMap::new();
    let entries = [
        ("iodc", 3600.0),
        ("toc", toc),
        ("a0", 4.65661287308e-9),
        ("a1", 1.13686837722e-12),
        ("a2", 0.0),
        ("iode", 3600.0),
        ("crs", 0.0),
        ("deltan", 0.0),
        ("m0", 0.0),
        ("cuc", 0.0),
        ("e", 0.005),
        ("cus", 0.0),
        ("sqrta", 26_560_000f64.sqrt()),
        ("toe", toc),
        ("cic", 0.0),
        ("omega0", 0.0),
        ("cis", 0.0),
        ("i0", 55f64.to_radians()),
        ("crc", 0.0),
        ("omega", 0.0),
        ("omegadot", 0.0),
        ("idot", 0.0),
    ];
    for (name, value) in entries {
        payload.insert(name.to_string(), value);
    }
    payload
}

fn record_payload(record: &NavRecord, toc: f64) -> FieldValues {
    let mut payload = BTreeMap::new();
    let entries = [
        ("iodc", record.iodc),
        ("toc", toc),
        ("a0", record.af0),
        ("a1", record.af1),
        ("a2", record.af2),
        ("iode", record.iode),
        ("crs", record.crs),
        ("deltan", record.deltan),
        ("m0", record.m0),
        ("cuc", record.cuc),
        ("e", record.e),
        ("cus", record.cus),
        ("sqrta", record.sqrta),
        ("toe", record.toe),
        ("cic", record.cic),
        ("omega0", record.omega0),
        ("cis", record.cis),
        ("i0", record.i0),
        ("crc", record.crc),
        ("omega", record.omega),
        ("omegadot", record.omegadot),
        ("idot", record.idot),
    ];
    for (name, value) in entries {
        payload.insert(name.to_string(), value);
    }
    payload
}

fn cmd_gen_nav(cfg: GenNavConfig) -> Result<(), AppError> {
    if !cfg.synthetic && cfg.input.is_none() {
        return Err(AppError::Usage(
            "either an input file or --synthetic is required".to_string(),
        ));
    }
    let start = parse_epoch_flag(&cfg.start)?;
    let convention = if cfg.toc_offset_43 {
        TocConvention::Offset43
    } else {
        TocConvention::Standard
    };
    let times = reference_times(&start, cfg.timezone, convention)
        .map_err(|e| AppError::Usage(e.to_string()))?;

    let mut payload = match &cfg.input {
        Some(path) => {
            let text = read_input(path)?;
            let file = parse_nav_file(&text).map_err(|e| AppError::Parse(e.to_string()))?;
            let record = match cfg.prn {
                Some(prn) => find_record(&file.records, prn)?,
                None => file
                    .records
                    .first()
                    .ok_or_else(|| AppError::Parse("file has no records".to_string()))?,
            };
            let mut p = record_payload(record, record.toe);
            if cfg.toc_offset_43 {
                p.insert("toc".to_string(), record.toe + 43.0);
            }
            p
        }
        None => synthetic_payload(times.toc),
    };

    for (name, value) in [("a0", cfg.a0), ("a1", cfg.a1), ("a2", cfg.a2)] {
        if let Some(v) = value {
            payload.insert(name.to_string(), v);
        }
    }
    if let Some(t_gps0) = cfg.clock_start {
        let init = ClockInit {
            a1: payload["a1"],
            a2: payload["a2"],
            t_gps0,
        };
        let mode = match cfg.clock_mode {
            ClockMode::Exact => RereferenceMode::Exact,
            ClockMode::Simplified => RereferenceMode::Simplified,
        };
        let poly = rereference(&init, payload["toc"], mode)
            .map_err(|e| AppError::Usage(e.to_string()))?;
        payload.insert("a0".to_string(), poly.a0);
        payload.insert("a1".to_string(), poly.a1);
        payload.insert("a2".to_string(), poly.a2);
    }

    let registry = LayoutRegistry::standard();
    let start_sow = reference_times(&start, cfg.timezone, TocConvention::Standard)
        .map_err(|e| AppError::Usage(e.to_string()))?
        .toc;
    let start_z = ZCount::from_seconds_of_week(navforge::gpstime::GpsSecondsOfWeek(start_sow));
    let superframe = assemble_superframe(&registry, start_z, &payload, None, 0).map_err(|e| {
        match &e {
            FramingError::FieldOverflow { .. } => AppError::FieldOverflow(e.to_string()),
            _ => AppError::Parse(e.to_string()),
        }
    })?;

    let format = match cfg.format {
        OutputFormat::Bits => BitstreamFormat::Text,
        OutputFormat::Bin => BitstreamFormat::Packed,
    };
    let bytes = serialize_bits(&superframe.frames[..cfg.frames], format);
    write_atomic(&cfg.output, &bytes)
}

fn cmd_constellation(
    t0: f64,
    duration: f64,
    step: f64,
    frame: FrameChoice,
    output: &Path,
) -> Result<(), AppError> {
    if step.is_nan() || step <= 0.0 {
        return Err(AppError::Usage(format!("step must be positive, got {step}")));
    }
    if duration < 0.0 {
        return Err(AppError::Usage(format!(
            "duration must be non-negative, got {duration}"
        )));
    }
    let constants = load_constants()?;
    let node_frame = match frame {
        FrameChoice::EarthFixed => NodeFrame::EarthFixed,
        FrameChoice::Inertial => NodeFrame::Inertial,
    };
    let sats = generate_constellation(&ConstellationSpec::default(), t0);
    let samples = (duration / step).floor() as u64;
    let mut csv = String::from("t,prn,x,y,z\n");
    for sat in &sats {
        for k in 0..=samples {
            let t = t0 + k as f64 * step;
            let p = position_from_elements(&sat.ephemeris, t, &constants, node_frame)
                .map_err(|e| AppError::Parse(e.to_string()))?;
            csv.push_str(&format!("{},{},{},{},{}\n", t, sat.prn, p.x, p.y, p.z));
        }
    }
    write_atomic(output, csv.as_bytes())
}

#[allow(clippy::too_many_arguments)]
fn cmd_dop(
    lat: f64,
    lon: f64,
    height: f64,
    mask: f64,
    start: &str,
    duration: f64,
    step: f64,
    output: &Path,
) -> Result<(), AppError> {
    let constants = load_constants()?;
    let epoch = parse_epoch_flag(start)?;
    let t0 = epoch.seconds_of_week().seconds();
    let user = GeodeticPosition {
        lat_deg: lat,
        lon_deg: lon,
        height_m: height,
    };
    let rows = pdop_series(
        &ConstellationSpec::default(),
        &user,
        t0,
        duration,
        step,
        mask,
        &constants,
    )
    .map_err(|e| match e {
        DopError::BadStep(_) | DopError::NegativeDuration(_) => AppError::Usage(e.to_string()),
        other => AppError::Parse(other.to_string()),
    })?;
    let mut csv = String::from("t,visible,pdop\n");
    for row in rows {
        match row.pdop {
            Some(p) => csv.push_str(&format!("{},{},{}\n", row.t, row.visible_count, p)),
            None => csv.push_str(&format!("{},{},\n", row.t, row.visible_count)),
        }
    }
    write_atomic(output, csv.as_bytes())
}
