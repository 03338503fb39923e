//! Replays the checked-in fuzz seeds through the same properties the fuzz
//! targets check, so regressions show up without a fuzzing toolchain.

use std::path::PathBuf;

use qecvar::errormodel::{parse_density_table, ErrorDistribution};
use qecvar::symbolic::vars::FlipSet;
use qecvar::symbolic::Polynomial;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter_map(|p| {
            let text = String::from_utf8(std::fs::read(&p).unwrap()).ok()?;
            Some((p.file_name().unwrap().to_string_lossy().into_owned(), text))
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn density_table_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("density_table") {
        if parse_density_table(&text).is_ok() {
            if ErrorDistribution::from_table_str(&text).is_ok() {
                accepted += 1;
            }
        } else {
            assert!(ErrorDistribution::from_table_str(&text).is_err(), "{name}");
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn polynomial_seeds() {
    for (name, text) in seeds("polynomial") {
        if let Ok(p) = Polynomial::parse(&text) {
            assert_eq!(Polynomial::parse(&p.to_string()).as_ref().ok(), Some(&p), "{name}");
        }
    }
}

#[test]
fn flip_set_seeds() {
    for (name, text) in seeds("flip_set") {
        if let Ok(set) = FlipSet::parse(&text) {
            assert_eq!(FlipSet::parse(&set.to_string()), Ok(set), "{name}");
        }
    }
}
