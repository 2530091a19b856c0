#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use little_model::cli::Cli;

// Parsing only; running the parsed command could enumerate 2^30 states.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let argv = std::iter::once("little").chain(text.split('\0'));
    let _ = Cli::try_parse_from(argv);
});
