#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_core::funcset::parse_bundle;

// A parsed bundle serializes and parses back to itself.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(bundle) = parse_bundle(text) else { return };
    let json = serde_json::to_string(&bundle).expect("bundle serializes");
    assert_eq!(parse_bundle(&json).expect("reparse"), bundle);
});
