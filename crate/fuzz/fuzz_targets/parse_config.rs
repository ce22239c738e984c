//! The config-file reader must reject arbitrary bytes without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_cli::config::parse_file_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_file_config(text);
    }
});
