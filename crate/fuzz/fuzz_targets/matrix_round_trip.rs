#![no_main]

use libfuzzer_sys::fuzz_target;
use matlog::format::parse_matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(m) = parse_matrix(data) else { return };
    let text = serde_json::to_string(&m.to_value()).unwrap();
    let back = parse_matrix(text.as_bytes()).expect("emitted file parses");
    assert_eq!(back, m);
});
