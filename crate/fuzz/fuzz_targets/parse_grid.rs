//! Grid specs must never panic and every accepted grid must honor the
//! documented shape: bounded length, finite points, inclusive endpoints.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_cli::parse::{parse_grid, MAX_GRID_POINTS};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(points) = parse_grid(text) {
            assert!(!points.is_empty());
            assert!(points.len() <= MAX_GRID_POINTS);
            assert!(points.iter().all(|p| p.is_finite()));
            let stop: f64 = text.split(':').nth(1).unwrap().trim().parse().unwrap();
            assert_eq!(*points.last().unwrap(), stop);
        }
    }
});
