//! Complex and matrix literals must parse or fail cleanly, never panic,
//! and accepted values must be finite-or-explicitly-infinite floats that
//! came from the input, not garbage.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_cli::parse::{parse_complex, parse_matrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(z) = parse_complex(text) {
            // Whatever parsed must re-render and re-parse to the same value.
            let round = parse_complex(&format!("{:e},{:e}", z.re, z.im)).unwrap();
            assert!(round == z || round.re.is_nan() || round.im.is_nan());
        }
        let _ = parse_matrix(text);
    }
});
