#![no_main]

use holonomy_core::comparator::SweepSpec;
use holonomy_core::HolonomyError;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match SweepSpec::parse(text) {
        Ok(spec) => {
            assert!(spec.point_count() >= 1);
        }
        Err(HolonomyError::Parse { line, .. }) => {
            assert!(line <= text.lines().count());
        }
        Err(other) => panic!("parser returned a non-parse error: {other:?}"),
    }
});
