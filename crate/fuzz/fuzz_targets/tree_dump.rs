#![no_main]

use libfuzzer_sys::fuzz_target;
use meancut::SpanningTree;

fuzz_target!(|data: &[u8]| {
    let Some((&n, body)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(body) else { return };
    if let Ok(t) = SpanningTree::from_dump(text, n as usize) {
        t.validate().unwrap();
        assert_eq!(SpanningTree::from_dump(&t.to_dump(), n as usize).unwrap(), t);
    }
});
