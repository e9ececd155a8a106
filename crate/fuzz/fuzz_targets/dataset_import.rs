#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_core::ratagen::{export, import, verify_instance};

// Imported instances export and re-import unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(instances) = import(data) else { return };
    let mut out = Vec::new();
    export(&instances, &mut out).expect("export to memory");
    let again = import(out.as_slice()).expect("exported dataset imports");
    assert_eq!(again, instances);
    for t in instances.iter().take(4) {
        let _ = verify_instance(t, Some(std::path::Path::new("/nonexistent")));
    }
});
