#![no_main]

use circumfeas_cli::TraceFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = TraceFile::from_json(text);
    }
});
