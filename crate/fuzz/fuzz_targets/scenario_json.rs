#![no_main]

use circumfeas::Scenario;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = Scenario::from_json(text) {
        // anything accepted must survive a round trip unchanged
        let again = Scenario::from_json(&s.to_json()).expect("re-serialized scenario parses");
        assert_eq!(again, s);
    }
});
