//! Loop JSON decoding must never panic, and every accepted loop must
//! survive classification and re-serialization.

#![no_main]

use libfuzzer_sys::fuzz_target;

use fiberkit::loops::LoopSO3;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(loop_) = LoopSO3::from_json_str(text) {
        let _ = loop_.classify();
        let round = LoopSO3::from_json_str(&loop_.to_json_string());
        assert!(round.is_ok(), "accepted loop failed to round trip");
    }
});
