#![no_main]

use cuspkit::report_io::{cusp_file_to_string, parse_cusp_str, CuspFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(load) = parse_cusp_str(text) else {
        return;
    };
    // whatever loaded must survive a write and re-read unchanged
    let records = load.cusps.iter().map(|c| c.record.clone()).collect();
    let again = parse_cusp_str(&cusp_file_to_string(&CuspFile::new(records))).expect("re-read");
    assert!(again.rejected.is_empty());
    assert_eq!(again.shapes(), load.shapes());
});
