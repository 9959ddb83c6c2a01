#![no_main]

use libfuzzer_sys::fuzz_target;
use meancut::check::OracleKind;
use meancut::sweep::Metric;
use meancut::{KernelKind, Preset, TruthColumn};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = s.parse::<TruthColumn>();
    let _ = s.parse::<OracleKind>();
    let _ = s.parse::<Metric>();
    if let Ok(k) = s.parse::<KernelKind>() {
        let _ = format!("{k:?}");
    }
    if let Ok(p) = s.parse::<Preset>() {
        assert_eq!(p.name().parse::<Preset>().unwrap(), p);
    }
});
