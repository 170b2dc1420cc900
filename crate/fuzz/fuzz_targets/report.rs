#![no_main]

use cuspkit::report_io::{parse_report_str, report_to_string};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(report) = parse_report_str(text) else {
        return;
    };
    let _ = report.validate();
    let again = parse_report_str(&report_to_string(&report)).expect("re-read");
    assert_eq!(again, report);
});
