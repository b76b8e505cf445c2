//! Fuzzes the config-file parser: arbitrary input must never panic, and any
//! accepted file must round-trip — re-parsing the echoed `key = value` lines
//! yields the same pairs.

#![no_main]

use libfuzzer_sys::fuzz_target;
use plancherel_cli::config::FileConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = FileConfig::parse(text) {
        let mut echoed = String::new();
        for (key, value) in config.echo_pairs() {
            echoed.push_str(&key);
            echoed.push_str(" = ");
            echoed.push_str(&value);
            echoed.push('\n');
        }
        let reparsed = FileConfig::parse(&echoed).expect("echoed config must reparse");
        assert_eq!(reparsed.echo_pairs(), config.echo_pairs());
    }
});
