#![no_main]
use knotflow::flow::{parse_field, Expr};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = Expr::parse(text) {
        let _ = e.eval([0.5, -0.25, 1.0]);
    }
    let parts: Vec<&str> = text.splitn(3, ';').collect();
    if let [x, y, z] = parts[..] {
        if let Ok(f) = parse_field(x, y, z) {
            let _ = f.eval([0.1, 0.2, 0.3]);
        }
    }
});
