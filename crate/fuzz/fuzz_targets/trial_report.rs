#![no_main]

use libfuzzer_sys::fuzz_target;
use little_model::report::parse_trial_report;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = parse_trial_report(text) {
        let again = parse_trial_report(&report.to_json()).expect("re-parse of rendered report");
        assert_eq!(again, report);
    }
});
