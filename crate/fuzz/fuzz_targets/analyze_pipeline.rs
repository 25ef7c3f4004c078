#![no_main]

use std::time::Duration;

use boolscramble::boolrank::RankBudget;
use boolscramble::characterize::match_extremal;
use boolscramble::parse_matrix;
use boolscramble::report::{analyze, AnalysisOptions};
use libfuzzer_sys::fuzz_target;

const MAX_ORDER: usize = 16;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = parse_matrix(text) else {
        return;
    };
    if !m.is_square() || m.rows() > MAX_ORDER {
        return;
    }
    let opts = AnalysisOptions {
        rank_budget: Some(RankBudget {
            max_dim: 12,
            timeout: Some(Duration::from_millis(200)),
            max_rectangles: 1 << 12,
        }),
    };
    let report = analyze(&m, &opts).expect("square input analyzes");
    assert!(!report.has_violation(), "bound violated for\n{}", m.to_text());
    if let Some(spec) = match_extremal(&m) {
        assert_eq!(spec.order(), m.rows());
        assert!(report.primitive);
    }
});
