#![no_main]

use libfuzzer_sys::fuzz_target;
use meancut::{parse_csv, TruthColumn};

fuzz_target!(|data: &[u8]| {
    // first byte picks the truth column
    let Some((&sel, body)) = data.split_first() else { return };
    let truth = match sel % 4 {
        0 => None,
        1 => Some(TruthColumn::First),
        2 => Some(TruthColumn::Last),
        _ => Some(TruthColumn::Index((sel / 4) as usize)),
    };
    if let Ok(d) = parse_csv(body, truth) {
        assert!(d.n() > 0 && d.dim() > 0);
        assert_eq!(d.points().len(), d.n() * d.dim());
        assert!(d.points().iter().all(|v| v.is_finite()));
        if let Some(t) = d.truth() {
            assert_eq!(t.len(), d.n());
            assert!(t.iter().all(|&l| l >= -1));
        }
    }
});
