#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_core::tqdsl::{execute, parse, Limits};

// Parse, pretty-print, re-parse, then run under tight limits.
fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(program) = parse(src) else { return };
    let printed = program.to_string();
    let again = parse(&printed).expect("printed program parses");
    assert_eq!(again.to_string(), printed);
    let limits = Limits {
        max_steps: 10_000,
        ..Limits::default()
    };
    let _ = execute(&program, None, &limits);
});
