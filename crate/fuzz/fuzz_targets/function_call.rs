#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_core::funcset::evaluate;
use tempqa_core::{FunctionCall, Tkg, TypedCall};

const FACTS: &str = r#"{"s":"E1","r":"R1","o":"E2","t0":2000,"t1":2005}
{"s":"E1","r":"R1","o":"E3","t0":2006,"t1":2010}
{"s":"E5","r":"R1","o":"E2","t0":2001,"t1":2003}
{"s":"E1","r":"R2","o":"E6","t0":2004,"t1":2008}"#;

// Decode a call, type it, evaluate it; a typed call round-trips.
fuzz_target!(|data: &[u8]| {
    let Ok(call) = serde_json::from_slice::<FunctionCall>(data) else { return };
    let Ok(typed) = TypedCall::from_call(&call) else { return };
    let back = TypedCall::from_call(&typed.to_call()).expect("canonical call re-types");
    assert_eq!(back, typed);
    let g = Tkg::load(FACTS.as_bytes()).expect("fixture loads");
    let _ = evaluate(&g, &typed);
});
