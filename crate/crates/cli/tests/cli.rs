//! Black-box checks of the command-line interface: exit codes, output
//! shapes, and environment-variable handling.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn navforge(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_navforge"));
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    navforge(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../navforge/tests/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn exit_code_mapping() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "out");

    let missing = run(&["parse-rinex", &tmp(&dir, "absent.nav"), "-o", &out]);
    assert_eq!(missing.status.code(), Some(3));

    let bad = tmp(&dir, "bad.nav");
    fs::write(&bad, "no header here\n").unwrap();
    let malformed = run(&["parse-rinex", &bad, "-o", &out]);
    assert_eq!(malformed.status.code(), Some(2));

    let prn = run(&[
        "extrapolate",
        &fixture("brdc_table1.nav"),
        "--prn",
        "99",
        "--to",
        "2011-06-28T04:00:00",
        "-o",
        &out,
    ]);
    assert_eq!(prn.status.code(), Some(4));

    let overflow = run(&["gen-nav", "--synthetic", "--a0", "1.0", "-o", &out]);
    assert_eq!(overflow.status.code(), Some(5));

    let step = run(&["dop", "--step", "0", "-o", &out]);
    assert_eq!(step.status.code(), Some(1));

    let epoch = run(&[
        "extrapolate",
        &fixture("brdc_table1.nav"),
        "--prn",
        "1",
        "--to",
        "next tuesday",
        "-o",
        &out,
    ]);
    assert_eq!(epoch.status.code(), Some(1));

    let no_input = run(&["gen-nav", "-o", &out]);
    assert_eq!(no_input.status.code(), Some(1));

    let unknown_flag = run(&["dop", "--no-such-flag", "-o", &out]);
    assert_eq!(unknown_flag.status.code(), Some(1));

    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn failed_run_leaves_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "partial.csv");
    let status = run(&[
        "extrapolate",
        &fixture("brdc_table1.nav"),
        "--prn",
        "99",
        "--to",
        "2011-06-28T04:00:00",
        "-o",
        &out,
    ]);
    assert_eq!(status.status.code(), Some(4));
    assert!(!PathBuf::from(&out).exists());
}

#[test]
fn parse_rinex_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "recs.csv");
    assert!(navforge(&["parse-rinex", &fixture("brdc_table1.nav"), "-o", &out])
        .status()
        .unwrap()
        .success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("prn,year,month,day"));
    assert_eq!(lines[0].split(',').count(), 38);
    assert!(lines[1].starts_with("1,2011,6,28,"));
    assert!(lines[2].starts_with("1,2011,6,30,"));
}

#[test]
fn extrapolate_row_count_and_times() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "el.csv");
    assert!(navforge(&[
        "extrapolate",
        &fixture("brdc_table1.nav"),
        "--prn",
        "1",
        "--to",
        "2011-06-28T04:00:00",
        "--step",
        "300",
        "-o",
        &out,
    ])
    .status()
    .unwrap()
    .success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // 4 h at 300 s: the reference row plus 48 steps.
    assert_eq!(lines.len(), 50);
    assert_eq!(lines[0], "t,a,e,i,omega0,omega,m0");
    assert!(lines[1].starts_with("172800,"));
    assert!(lines[49].starts_with("187200,"));
}

#[test]
fn dop_defaults_cover_a_day() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "dop.csv");
    assert!(navforge(&["dop", "-o", &out]).status().unwrap().success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 290);
    assert_eq!(lines[0], "t,visible,pdop");
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 3);
        let visible: u32 = cells[1].parse().unwrap();
        assert!(visible >= 4);
        let pdop: f64 = cells[2].parse().unwrap();
        assert!(pdop > 0.0 && pdop < 10.0);
    }
}

#[test]
fn constellation_orders_by_prn_then_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "con.csv");
    assert!(navforge(&[
        "constellation",
        "--duration",
        "600",
        "--step",
        "300",
        "-o",
        &out,
    ])
    .status()
    .unwrap()
    .success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 24 * 3);
    assert_eq!(lines[0], "t,prn,x,y,z");
    let key = |line: &str| {
        let cells: Vec<&str> = line.split(',').collect();
        (
            cells[1].parse::<u32>().unwrap(),
            cells[0].parse::<f64>().unwrap() as i64,
        )
    };
    let keys: Vec<_> = lines[1..].iter().map(|l| key(l)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    // Sanity on magnitudes: every position sits near the orbit radius.
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        let (x, y, z): (f64, f64, f64) = (
            cells[2].parse().unwrap(),
            cells[3].parse().unwrap(),
            cells[4].parse().unwrap(),
        );
        let r = (x * x + y * y + z * z).sqrt();
        assert!((2.6e7..2.7e7).contains(&r));
    }
}

#[test]
fn constants_override_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let base = tmp(&dir, "base.csv");
    let tweaked = tmp(&dir, "tweaked.csv");
    let consts = tmp(&dir, "constants.txt");
    fs::write(&consts, "mu = 3.99e14\n# denser earth\n").unwrap();

    assert!(navforge(&["constellation", "--duration", "600", "-o", &base])
        .status()
        .unwrap()
        .success());
    assert!(navforge(&["constellation", "--duration", "600", "-o", &tweaked])
        .env("NAVFORGE_CONSTANTS", &consts)
        .status()
        .unwrap()
        .success());
    assert_ne!(
        fs::read_to_string(&base).unwrap(),
        fs::read_to_string(&tweaked).unwrap()
    );

    let badconsts = tmp(&dir, "bad.txt");
    fs::write(&badconsts, "this is not a key value line\n").unwrap();
    let bad = navforge(&["constellation", "--duration", "0", "-o", &base])
        .env("NAVFORGE_CONSTANTS", &badconsts)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gen_nav_formats_and_clock_flags() {
    let dir = tempfile::tempdir().unwrap();

    let text_out = tmp(&dir, "one.bits");
    assert!(navforge(&["gen-nav", "--synthetic", "-o", &text_out])
        .status()
        .unwrap()
        .success());
    let text = fs::read_to_string(&text_out).unwrap();
    assert_eq!(text.len(), 1505);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.len() == 300));
    assert!(text.starts_with("10001011"));
    assert!(text.chars().all(|c| c == '0' || c == '1' || c == '\n'));

    let bin_out = tmp(&dir, "one.bin");
    assert!(navforge(&[
        "gen-nav",
        "--synthetic",
        "--frames",
        "3",
        "--format",
        "bin",
        "-o",
        &bin_out,
    ])
    .status()
    .unwrap()
    .success());
    assert_eq!(fs::read(&bin_out).unwrap().len(), 563); // ceil(4500 / 8)

    // Re-deriving the clock from a start epoch changes the emitted bias bits.
    let plain = tmp(&dir, "plain.bits");
    let rederived = tmp(&dir, "rederived.bits");
    assert!(navforge(&[
        "gen-nav",
        "--synthetic",
        "--a1",
        "1e-9",
        "-o",
        &plain
    ])
    .status()
    .unwrap()
    .success());
    assert!(navforge(&[
        "gen-nav",
        "--synthetic",
        "--a1",
        "1e-9",
        "--clock-start",
        "0",
        "-o",
        &rederived,
    ])
    .status()
    .unwrap()
    .success());
    assert_ne!(
        fs::read_to_string(&plain).unwrap(),
        fs::read_to_string(&rederived).unwrap()
    );

    // Out-of-range frame counts are a usage error.
    let too_many = run(&["gen-nav", "--synthetic", "--frames", "26", "-o", &plain]);
    assert_eq!(too_many.status.code(), Some(1));
}
