#![no_main]

use libfuzzer_sys::fuzz_target;
use qecvar_cli::config::parse_config_text;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_config_text(text);
});
