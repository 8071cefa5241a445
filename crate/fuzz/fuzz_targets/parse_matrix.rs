#![no_main]

use libfuzzer_sys::fuzz_target;
use matlog::format::parse_matrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = parse_matrix(data) {
        assert!(m.dim() > 0);
        assert!(m.to_complex().is_finite());
    }
});
