#![no_main]
use libfuzzer_sys::fuzz_target;
use qgraph::checker::SuiteConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = SuiteConfig::from_json_str(text) {
        let _ = config.validate();
    }
});
