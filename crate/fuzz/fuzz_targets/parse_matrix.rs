#![no_main]

use boolscramble::parse_matrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_matrix(text) {
        let written = m.to_text();
        assert_eq!(parse_matrix(&written).expect("writer output parses"), m);
    }
});
