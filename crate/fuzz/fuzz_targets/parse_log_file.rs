#![no_main]

use libfuzzer_sys::fuzz_target;
use matlog::format::ParsedMatrix;
use matlog::{RealMatrix, Tolerance};
use matlog_cli::verify::{parse_log_file, verify, LogFile};

fuzz_target!(|data: &[u8]| {
    let Ok(log) = parse_log_file(data) else { return };
    let dim = match &log {
        LogFile::Matrix(m) => m.dim(),
        LogFile::Report(_) => 1,
    };
    if dim > 16 {
        return;
    }
    let a = ParsedMatrix::Real(RealMatrix::identity(dim));
    let _ = verify(&a, "", &log, &Tolerance::default());
});
