//! The edge-list parser must never panic on arbitrary text, and anything it
//! accepts must survive a write/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use pyro::io::{parse_edge_list, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(tree) = parse_edge_list(text) else {
        return;
    };
    let reparsed = parse_edge_list(&write_edge_list(&tree)).expect("round trip parses");
    assert_eq!(reparsed.n(), tree.n());
    for v in 0..tree.n() {
        assert_eq!(reparsed.adj(v), tree.adj(v), "adjacency of {v} survives");
    }
});
