#![no_main]
use knotflow::braid::{closure_info, BraidWord};
use libfuzzer_sys::fuzz_target;

// First byte picks the strand count, the rest is the word.
fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(b) = BraidWord::parse(text, k as usize % 32) {
        assert_eq!(BraidWord::parse(&b.to_text(), b.strands()).unwrap(), b);
        let info = closure_info(&b);
        assert!(info.components >= 1 && info.components <= b.strands());
    }
});
