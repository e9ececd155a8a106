#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_core::Tkg;

// A loaded graph saves and reloads to the same facts.
fuzz_target!(|data: &[u8]| {
    let Ok(g) = Tkg::load(data) else { return };
    let text = g.to_jsonl();
    let again = Tkg::load(text.as_bytes()).expect("saved graph reloads");
    assert_eq!(again.records(), g.records());
});
