#![no_main]

use libfuzzer_sys::fuzz_target;
use qecvar::symbolic::vars::FlipSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = FlipSet::parse(text) {
        assert_eq!(FlipSet::parse(&set.to_string()), Ok(set));
    }
});
