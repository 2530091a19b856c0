#![no_main]

use libfuzzer_sys::fuzz_target;
use little_model::report::parse_value_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = parse_value_list(text) {
        assert!(values.iter().all(|v| v.is_finite()));
    }
});
