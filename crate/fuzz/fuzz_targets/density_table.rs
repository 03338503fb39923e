#![no_main]

use libfuzzer_sys::fuzz_target;
use qecvar::errormodel::{parse_density_table, ErrorDistribution};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if parse_density_table(text).is_ok() {
        // Building the distribution validates the grid and normalizes the
        // density. It may reject the table but must not panic.
        let _ = ErrorDistribution::from_table_str(text);
    }
});
