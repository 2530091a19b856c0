#![no_main]

use libfuzzer_sys::fuzz_target;
use little_model::report::parse_plot_data;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_plot_data(text);
    }
});
