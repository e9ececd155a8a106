#![no_main]

use libfuzzer_sys::fuzz_target;
use tempqa_pipeline::orchestrator::{ChatClient, ChatParams, Message, MockScript, ScriptedClient};

// Parse a script and drain it with a few prompts.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(script) = MockScript::parse(text) else { return };
    let client = ScriptedClient::new(script);
    for prompt in ["", "Available functions:", text] {
        let _ = client.complete(&[Message::user(prompt)], &ChatParams::default());
    }
});
