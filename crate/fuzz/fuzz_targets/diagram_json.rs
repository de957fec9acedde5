#![no_main]
use knotflow::diagram::{vogel, Diagram};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(d) = Diagram::from_json(text) else { return };
    assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
    if d.crossing_count() <= 40 {
        if let Ok(r) = vogel(&d) {
            assert_eq!(Diagram::from_braid(&r.braid).writhe(), d.writhe());
        }
    }
});
