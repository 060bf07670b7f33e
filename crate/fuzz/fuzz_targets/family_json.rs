//! Generator-family JSON decoding and re-verification must never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

use fiberkit::james::FamilyRecordJson;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = serde_json::from_str::<Vec<FamilyRecordJson>>(text) {
        for record in records.iter().take(8) {
            let _ = record.verify();
        }
    }
});
