#![no_main]

use circumfeas::trace_csv::read_trace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = read_trace(data) {
        assert!(!table.rows.is_empty());
        assert!(table.rows.iter().all(|r| r.point.dim() == table.dim));
    }
});
