#![no_main]

use libfuzzer_sys::fuzz_target;
use qecvar::symbolic::Polynomial;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = Polynomial::parse(text) {
        let printed = p.to_string();
        let again = Polynomial::parse(&printed).expect("printed polynomial parses");
        assert_eq!(again, p);
    }
});
