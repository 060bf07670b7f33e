//! Loop description parser must never panic on arbitrary text, and every
//! accepted non-file description must build at a small resolution.

#![no_main]

use libfuzzer_sys::fuzz_target;

use fiberkit::loopspec::{build_loop, parse_loop_spec, LoopSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_loop_spec(text) {
        // never touch the filesystem from the fuzzer
        if !matches!(spec, LoopSpec::File(_)) {
            let _ = build_loop(&spec, 16);
        }
    }
});
