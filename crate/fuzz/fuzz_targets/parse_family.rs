#![no_main]

use boolscramble::families::{parse_block_list, FamilyName, MAX_GENERATED_ORDER};
use libfuzzer_sys::fuzz_target;

// Input: `name|b|blocks`, each part optional.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut parts = text.splitn(3, '|');
    let Ok(name) = parts.next().unwrap_or("").parse::<FamilyName>() else {
        return;
    };
    let b = parts.next().and_then(|s| s.trim().parse::<usize>().ok());
    let blocks = match parts.next().map(parse_block_list) {
        Some(Ok(list)) => Some(list),
        Some(Err(_)) => return,
        None => None,
    };
    let Ok(spec) = name.into_spec(b, blocks) else {
        return;
    };
    if let Ok(m) = spec.generate() {
        assert!(m.is_square() && m.rows() <= MAX_GENERATED_ORDER);
        assert_eq!(m.rows(), spec.order());
    }
});
