//! Core invariant: the step-by-step process validator and the closed-ball
//! cover validator must agree on every tree and every duplicate-free
//! sequence. Trees and sequences are decoded from the raw byte stream.

#![no_main]

use libfuzzer_sys::fuzz_target;
use pyro::burn::{is_valid_burning, is_valid_cover, simulate};
use pyro::tree::build_tree;
use pyro::BurningSequence;

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let n = 1 + (data[0] as usize) % 24;
    let k = 1 + (data[1] as usize) % 8;
    let mut bytes = data[2..].iter().copied();

    // Random attachment: vertex i hangs below one of 0..i, so the edge set
    // is a tree on n vertices by construction.
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let parent = (bytes.next().unwrap_or(0) as usize) % i.max(1);
        edges.push((parent, i));
    }
    let t = build_tree(n, &edges).expect("construction is a tree");

    let mut sources = Vec::with_capacity(k);
    for _ in 0..k {
        let v = (bytes.next().unwrap_or(0) as usize) % n;
        if !sources.contains(&v) {
            sources.push(v);
        }
    }
    if sources.is_empty() {
        return;
    }
    let seq = BurningSequence::new(sources).expect("duplicates filtered above");

    let strict = is_valid_burning(&t, &seq).expect("ids in range").valid();
    let cover = is_valid_cover(&t, &seq).expect("ids in range");
    assert_eq!(strict, cover, "validators must agree on n={n} seq={seq:?}");

    let trace = simulate(&t, &seq).expect("ids in range");
    if strict {
        let done = trace.fully_burned_at.expect("valid sequence burns everything");
        assert!(done <= seq.len());
    }
});
