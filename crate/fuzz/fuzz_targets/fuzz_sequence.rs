//! The sequence-file parser must never panic, and accepted id lists must
//! round-trip through write_sequence byte-for-byte semantics.

#![no_main]

use libfuzzer_sys::fuzz_target;
use pyro::io::{parse_sequence, write_sequence};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ids) = parse_sequence(text) else {
        return;
    };
    let reparsed = parse_sequence(&write_sequence(&ids)).expect("round trip parses");
    assert_eq!(reparsed, ids);
});
