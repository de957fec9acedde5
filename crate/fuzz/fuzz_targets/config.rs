#![no_main]
use knotflow::flow::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::parse(text) {
        assert!(!cfg.tgrid.is_empty() && cfg.h > 0.0);
    }
});
