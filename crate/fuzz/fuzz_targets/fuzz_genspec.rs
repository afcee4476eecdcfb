//! Generator specs parsed from arbitrary JSON must either be rejected or
//! produce a structurally sound tree (and a valid witness when one is
//! promised). Size fields are capped so each run stays fast.

#![no_main]

use libfuzzer_sys::fuzz_target;
use pyro::burn::is_valid_burning;
use pyro::gen::{generate, GenSpec};
use pyro::tree::classify;

fn within_caps(spec: &GenSpec) -> bool {
    match spec {
        GenSpec::Perfect { h } => *h <= 10,
        GenSpec::Complete { h, leaves } => *h <= 10 && *leaves <= 1 << 10,
        GenSpec::FullRandom { n, .. } => *n <= 301,
        GenSpec::FbtnpRandom { n, .. } => *n <= 301,
        GenSpec::ThreeKAryRandom { n, k, .. } => *n <= 301 && *k <= 16,
        GenSpec::Path { n } => *n <= 1000,
        GenSpec::Prop1Maximal { k } => *k <= 8,
        GenSpec::RandomTree { n, .. } => *n <= 301,
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = GenSpec::from_json(text) else {
        return;
    };
    if !within_caps(&spec) {
        return;
    }
    let Ok(out) = generate(&spec) else {
        return;
    };
    let t = out.rooted.tree();
    classify(t, out.rooted.root()).expect("generated tree classifies");
    if let Some(w) = &out.witness {
        assert!(
            is_valid_burning(t, w).expect("witness ids in range").valid(),
            "promised witness burns the tree"
        );
    }
});
