//! End-to-end acceptance checks: every public bound is exercised at corpus
//! scale and certified against the strict validator and, where feasible, the
//! exact solver. Each test prints one `ACCEPTANCE <id> ...: PASS/FAIL` line
//! (visible with `--nocapture`; the FAIL line also appears in the captured
//! output of a failing test).

use pyro::bounds::{
    burn_complete, burn_fbtnp_height, burn_fbtnp_improved, burn_fbtnp_sqrt_n, burn_general_tree,
    burn_perfect, closed_form,
};
use pyro::burn::{is_valid_burning, is_valid_cover, BurningSequence};
use pyro::exact::burning_number_exact;
use pyro::gen::{complete_binary, path, perfect_binary, prop1_maximal, random_fbtnp, random_tree};
use pyro::tree::closed_neighborhood;
use pyro::{Budget, EngineMode};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints the verdict line for a criterion; FAIL when dropped by a panic.
struct Criterion {
    id: usize,
    label: &'static str,
    passed: bool,
}

impl Criterion {
    fn start(id: usize, label: &'static str) -> Self {
        Criterion {
            id,
            label,
            passed: false,
        }
    }

    fn pass(mut self) {
        self.passed = true;
        println!("ACCEPTANCE {} ({}): PASS", self.id, self.label);
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        if !self.passed {
            println!("ACCEPTANCE {} ({}): FAIL", self.id, self.label);
        }
    }
}

/// Smallest `s` with `s * s >= x`.
fn csqrt(x: usize) -> usize {
    let s = x.isqrt();
    if s * s < x {
        s + 1
    } else {
        s
    }
}

/// 500 full-binary-not-perfect instances: five seed groups of 100 trees with
/// odd order in [5, 999]. Criteria 3 and 4 share this corpus.
fn fbtnp_corpus() -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(500);
    for group in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC0 + group);
        for _ in 0..100 {
            let n = 2 * rng.random_range(2..=499) + 1;
            out.push((n, rng.random()));
        }
    }
    out
}

#[test]
fn acceptance_1_closed_forms_match_oracle() {
    let c = Criterion::start(1, "closed forms equal exact burning number");
    let budget = Budget::default();
    for h in 1..=3usize {
        let mut cases = vec![(perfect_binary(h).unwrap(), h + 1)];
        let cap = 1usize << h;
        for leaves in 1..cap {
            let expect = if cap - leaves == 1 { h + 1 } else { h };
            cases.push((complete_binary(h, leaves).unwrap(), expect));
        }
        for (rv, expect) in cases {
            let n = rv.tree().n();
            let (value, tag) = closed_form(&rv).expect("closed form applies");
            assert_eq!(value, expect, "closed form h={h} n={n} tag={tag}");
            let oracle = burning_number_exact(rv.tree(), &budget).unwrap();
            assert_eq!(oracle.b, expect, "oracle h={h} n={n}");
        }
    }
    c.pass();
}

#[test]
fn acceptance_2_path_square_root_law() {
    let c = Criterion::start(2, "paths burn in ceil(sqrt(n)) steps");
    let budget = Budget::default();
    for n in 1..=16usize {
        let rv = path(n).unwrap();
        let oracle = burning_number_exact(rv.tree(), &budget).unwrap();
        assert_eq!(oracle.b, csqrt(n), "P_{n}");
        assert!(is_valid_burning(rv.tree(), &oracle.witness).unwrap().valid());
    }
    c.pass();
}

#[test]
fn acceptance_3_sqrt_bound_holds_on_corpus() {
    let c = Criterion::start(3, "sqrt(n) schedule valid on 500 full binary trees");
    for (n, seed) in fbtnp_corpus() {
        let rv = random_fbtnp(n, seed).unwrap();
        let res = burn_fbtnp_sqrt_n(&rv).unwrap();
        assert_eq!(res.claimed_bound, csqrt(n), "claim n={n} seed={seed}");
        assert!(
            res.steps_used <= csqrt(n),
            "steps n={n} seed={seed}: {} > {}",
            res.steps_used,
            csqrt(n)
        );
        assert!(
            is_valid_burning(rv.tree(), &res.sequence).unwrap().valid(),
            "validity n={n} seed={seed}"
        );
    }
    c.pass();
}

#[test]
fn acceptance_4_improved_bound_and_quotas_hold() {
    let c = Criterion::start(4, "sqrt(n+9)-1 schedule valid with per-iteration quotas");
    for (n, seed) in fbtnp_corpus() {
        if n < 19 {
            continue;
        }
        let rv = random_fbtnp(n, seed).unwrap();
        let res = burn_fbtnp_improved(&rv).unwrap();
        let bound = csqrt(n + 9) - 1;
        assert_eq!(res.claimed_bound, bound, "claim n={n} seed={seed}");
        assert!(
            res.steps_used <= bound,
            "steps n={n} seed={seed}: {} > {bound}",
            res.steps_used
        );
        assert!(
            is_valid_burning(rv.tree(), &res.sequence).unwrap().valid(),
            "validity n={n} seed={seed}"
        );
        for (it, a) in res.audit.iter().enumerate() {
            let Some(q) = a.quota_claimed else { continue };
            let k = a.k_case;
            let allowed: &[usize] = match a.mode {
                EngineMode::Improved => &[2 * k + 2, 4 * k, 4 * k - 2, 4 * k - 4],
                EngineMode::Sqrt => &[2 * k, 4 * k - 4],
            };
            assert!(
                allowed.contains(&q),
                "n={n} seed={seed} iteration {it} ({}) claims unknown quota {q} at k={k}",
                a.case_tag
            );
            assert!(
                a.covered_fresh >= q,
                "n={n} seed={seed} iteration {it} ({}) burned {} < quota {q}",
                a.case_tag,
                a.covered_fresh
            );
        }
    }
    c.pass();
}

#[test]
fn acceptance_5_general_bound_beats_prior() {
    let c = Criterion::start(5, "general-tree bound valid and at most the prior formula");
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC5);
    for i in 0..200 {
        let n = rng.random_range(50..=500);
        let seed: u64 = rng.random();
        let rv = random_tree(n, seed).unwrap();
        let t = rv.tree();
        let n2 = (0..n).filter(|&v| t.degree(v) == 2).count();
        let res = burn_general_tree(t, 0).unwrap();
        assert_eq!(
            res.claimed_bound,
            csqrt(n + n2 + 8) - 1,
            "claim #{i} n={n} seed={seed}"
        );
        assert!(
            res.steps_used <= res.claimed_bound,
            "steps #{i} n={n} seed={seed}: {} > {}",
            res.steps_used,
            res.claimed_bound
        );
        assert!(
            is_valid_burning(t, &res.sequence).unwrap().valid(),
            "validity #{i} n={n} seed={seed}"
        );
        // Prior bound ceil(sqrt(n + n2 + 1/4) + 1/2), integer-exact as the
        // smallest s with s(s-1) >= n + n2.
        let prior = (1..).find(|&s: &usize| s * (s - 1) >= n + n2).unwrap();
        assert!(
            res.claimed_bound <= prior,
            "#{i} n={n} n2={n2}: {} > prior {prior}",
            res.claimed_bound
        );
    }
    c.pass();
}

#[test]
fn acceptance_6_extremal_family_is_tight() {
    let c = Criterion::start(6, "extremal chain has the exact order and burning number");
    for k in 2..=10usize {
        let (rv, witness) = prop1_maximal(k).unwrap();
        let t = rv.tree();
        let n = t.n();
        assert_eq!(n, 3 * ((1usize << k) - 1) - 2 * k, "order k={k}");
        assert_eq!(witness.len(), k, "witness length k={k}");
        assert!(
            is_valid_burning(t, &witness).unwrap().valid(),
            "witness k={k}"
        );
        // The k balls partition the vertex set: every vertex hit exactly once.
        let mut hits = vec![0usize; n];
        for (i, &v) in witness.sources().iter().enumerate() {
            for w in closed_neighborhood(t, v, k - (i + 1)).unwrap() {
                hits[w] += 1;
            }
        }
        assert!(
            hits.iter().all(|&h| h == 1),
            "balls overlap or miss for k={k}"
        );
        if k <= 3 {
            let oracle = burning_number_exact(t, &Budget::default()).unwrap();
            assert_eq!(oracle.b, k, "oracle k={k}");
        }
    }
    c.pass();
}

#[test]
fn acceptance_7_validators_equivalent_at_scale() {
    let c = Criterion::start(7, "process and cover validators agree on 10000 pairs");
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC7);
    for i in 0..10_000 {
        let n = rng.random_range(1..=40);
        let seed: u64 = rng.random();
        let rv = random_tree(n, seed).unwrap();
        let t = rv.tree();
        let len = rng.random_range(1..=n);
        let mut ids: Vec<usize> = (0..n).collect();
        ids.shuffle(&mut rng);
        let s = BurningSequence::new(ids[..len].to_vec()).unwrap();
        let strict = is_valid_burning(t, &s).unwrap().valid();
        let cover = is_valid_cover(t, &s).unwrap();
        assert_eq!(strict, cover, "pair #{i} n={n} seed={seed} sources={s:?}");
    }
    c.pass();
}

#[test]
fn acceptance_8_bounds_never_undercut_oracle() {
    let c = Criterion::start(8, "constructive bounds never beat the exact optimum");
    let budget = Budget::default();
    for n in 1..=14usize {
        for seed in 0..15u64 {
            let rv = random_tree(n, seed).unwrap();
            let t = rv.tree();
            let oracle = burning_number_exact(t, &budget).unwrap();
            let mut results = vec![burn_general_tree(t, 0).unwrap()];
            for res in [
                burn_perfect(&rv),
                burn_complete(&rv),
                burn_fbtnp_height(&rv),
                burn_fbtnp_sqrt_n(&rv),
                burn_fbtnp_improved(&rv),
            ].into_iter().flatten() {
                results.push(res);
            }
            for res in results {
                assert!(
                    is_valid_burning(t, &res.sequence).unwrap().valid(),
                    "{} invalid on n={n} seed={seed}",
                    res.bound_name
                );
                assert!(
                    res.steps_used >= oracle.b,
                    "{} used {} steps below optimum {} on n={n} seed={seed}",
                    res.bound_name,
                    res.steps_used,
                    oracle.b
                );
            }
        }
    }
    c.pass();
}
