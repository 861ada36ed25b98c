#![no_main]

use holonomy_core::comparator::SweepSpec;
use libfuzzer_sys::fuzz_target;

// Anything that parses must print back to an equal spec.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = SweepSpec::parse(text) {
        let printed = spec.to_string();
        let again = SweepSpec::parse(&printed).expect("printed spec parses");
        assert_eq!(again, spec);
        assert_eq!(again.to_string(), printed);
    }
});
