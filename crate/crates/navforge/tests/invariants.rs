//! Property-based invariants: parity code laws, time arithmetic against an
//! independent calendar implementation, and field codec round-trips.

use chrono::{Datelike, NaiveDate};
use proptest::prelude::*;

use navforge::framing::{decode_field, encode_field, FieldLayout};
use navforge::gpstime::{CalendarDateTime, GpsSecondsOfWeek, ZCount};
use navforge::parity::{append_parity, compute_parity, verify_word, DataWord24, Word30};
use navforge::rinex::{format_d19, parse_real};

proptest! {
    #[test]
    fn day_number_matches_calendar_oracle(
        y in 1980i32..=2099,
        m in 1u32..=12,
        d in 1u32..=31,
    ) {
        let Some(date) = NaiveDate::from_ymd_opt(y, m, d) else {
            // Not a real calendar date (e.g. Feb 30); nothing to compare.
            return Ok(());
        };
        let epoch = NaiveDate::from_ymd_opt(1980, 1, 6).unwrap();
        let last = NaiveDate::from_ymd_opt(2099, 12, 28).unwrap();
        match CalendarDateTime::from_date(y, m, d) {
            Ok(cdt) => {
                prop_assert_eq!(cdt.day_number().0 as i64, (date - epoch).num_days());
                prop_assert_eq!(
                    cdt.day_number().weekday_index(),
                    date.weekday().num_days_from_sunday()
                );
            }
            Err(_) => prop_assert!(date < epoch || date > last),
        }
    }

    #[test]
    fn z_count_increment_law(t in 0.0f64..604_794.0) {
        let z0 = ZCount::from_seconds_of_week(GpsSecondsOfWeek(t)).value();
        let z1 = ZCount::from_seconds_of_week(GpsSecondsOfWeek(t + 6.0)).value();
        prop_assert_eq!(z1, (z0 + 1) % 100_800);
    }

    #[test]
    fn parity_round_trip(data in 0u32..1 << 24) {
        prop_assert!(verify_word(&append_parity(DataWord24::new(data))));
    }

    #[test]
    fn parity_detects_single_bit_flips(data in 0u32..1 << 24, k in 1u32..=30) {
        let word = append_parity(DataWord24::new(data));
        let flipped = Word30::from_u32(word.as_u32() ^ (1 << (30 - k)));
        prop_assert!(!verify_word(&flipped));
    }

    #[test]
    fn parity_is_linear(a in 0u32..1 << 24, b in 0u32..1 << 24) {
        let left = compute_parity(DataWord24::new(a) ^ DataWord24::new(b));
        let combined =
            compute_parity(DataWord24::new(a)).value() ^ compute_parity(DataWord24::new(b)).value();
        prop_assert_eq!(left.value(), combined);
    }

    #[test]
    fn field_codec_round_trip(
        width in 1u8..=24,
        offset in 0u8..24,
        exp in -55i32..=5,
        signed in any::<bool>(),
        raw in any::<u32>(),
    ) {
        let start_bit = 1 + offset % (25 - width);
        let layout = FieldLayout::new(1, 3, start_bit, width, 2f64.powi(exp), signed);
        let stored: i64 = if signed {
            let half = 1i64 << (width - 1);
            (raw as i64 % (2 * half)) - half
        } else {
            raw as i64 % (1i64 << width)
        };
        let value = stored as f64 * layout.scale;
        let placed = encode_field("f", value, &layout).unwrap();
        prop_assert_eq!(decode_field(placed, &layout), stored);
    }

    #[test]
    fn d_format_parses_close(v in -1e9f64..1e9) {
        let parsed = parse_real(&format_d19(v)).unwrap();
        prop_assert!((parsed - v).abs() <= 1e-11 * v.abs() + 1e-300);
    }
}
