#![no_main]

use hyperwalk::triangle::TriangleConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(config) = TriangleConfig::from_json(text) else { return };
    let json = serde_json::to_string(&config.to_raw()).expect("raw config serializes");
    let again = TriangleConfig::from_json(&json).expect("validated config revalidates");
    assert_eq!(again.coxeter(), config.coxeter());
});
