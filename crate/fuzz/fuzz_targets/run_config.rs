#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_cli::config::{FileConfig, KEYS};

// Every key of a parsed config reads back; typed reads never panic.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = FileConfig::parse(text) else { return };
    for key in KEYS {
        let _ = cfg.get::<u64>(key);
        let _ = cfg.get::<f64>(key);
        let _ = cfg.list::<String>(key);
    }
});
