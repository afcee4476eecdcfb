//! Burning process simulation and sequence validators.
//!
//! Step semantics: with `B_0` empty, step `i` produces
//! `B_i = N_1[B_{i-1}] ∪ {x_i}`. The source `x_i` is fresh iff it is unburned
//! at the start of the step (`x_i ∉ B_{i-1}`); spreading and ignition both
//! read the previous step's set, which is what makes the process view agree
//! with the cover characterization `∪ N_{k-i}[x_i] = V` plus the spacing rule
//! `d(x_i, x_j) ≥ j - i`.

use crate::tree::{bfs_dist, Tree};
use crate::{Error, Result};

/// An ordered list of distinct ignition sources.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct BurningSequence {
    sources: Vec<usize>,
}

impl BurningSequence {
    /// Rejects repeated vertices; the empty sequence is allowed and judged by
    /// the validators.
    pub fn new(sources: Vec<usize>) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(sources.len());
        for &v in &sources {
            if !seen.insert(v) {
                return Err(Error::BadParam(format!("duplicate source vertex {v}")));
            }
        }
        Ok(BurningSequence { sources })
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
}

/// One step of a simulated burn.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BurnStep {
    /// The step's source, or `None` when it was already burned at the start
    /// of the step (the set arithmetic is unaffected; validity is judged by
    /// [`is_valid_burning`]).
    pub newly_ignited: Option<usize>,
    /// Vertices reached by spreading this step, sorted.
    pub newly_spread: Vec<usize>,
}

/// Full trace of a burn.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BurnTrace {
    pub steps: Vec<BurnStep>,
    /// Cumulative burned set after each step, sorted.
    pub burned_after: Vec<Vec<usize>>,
    /// First step at which every vertex is burned, if any.
    pub fully_burned_at: Option<usize>,
}

/// Simulates the burn of `s` on `t` for exactly `s.len()` steps.
pub fn simulate(t: &Tree, s: &BurningSequence) -> Result<BurnTrace> {
    for &v in s.sources() {
        t.check_vertex(v)?;
    }
    let n = t.n();
    let mut burned = vec![false; n];
    let mut burned_count = 0usize;
    let mut frontier: Vec<usize> = Vec::new();
    let mut steps = Vec::with_capacity(s.len());
    let mut burned_after = Vec::with_capacity(s.len());
    let mut fully_burned_at = None;
    for (idx, &x) in s.sources().iter().enumerate() {
        let step_no = idx + 1;
        // Freshness is judged before this step's spread: x must not be in
        // the previous step's burned set. Spreading may still reach x this
        // step; both happen simultaneously against the old set.
        let fresh_at_start = !burned[x];
        let mut spread = Vec::new();
        for &u in &frontier {
            for &w in t.adj(u) {
                if !burned[w] {
                    burned[w] = true;
                    burned_count += 1;
                    spread.push(w);
                }
            }
        }
        spread.sort_unstable();
        let newly_ignited = fresh_at_start.then_some(x);
        frontier = spread.clone();
        if !burned[x] {
            burned[x] = true;
            burned_count += 1;
            frontier.push(x);
        }
        steps.push(BurnStep {
            newly_ignited,
            newly_spread: spread,
        });
        let mut cumulative: Vec<usize> = (0..n).filter(|&v| burned[v]).collect();
        cumulative.sort_unstable();
        burned_after.push(cumulative);
        if fully_burned_at.is_none() && burned_count == n {
            fully_burned_at = Some(step_no);
        }
    }
    Ok(BurnTrace {
        steps,
        burned_after,
        fully_burned_at,
    })
}

/// Outcome of the strict process validator.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BurnVerdict {
    Valid,
    NoSources,
    UnburnedRemain { unburned: Vec<usize> },
    SourceAlreadyBurned { step: usize, vertex: usize },
}

impl BurnVerdict {
    pub fn valid(&self) -> bool {
        matches!(self, BurnVerdict::Valid)
    }
}

/// Strict process validator: every source must be fresh when ignited and the
/// tree must be fully burned after the final step.
pub fn is_valid_burning(t: &Tree, s: &BurningSequence) -> Result<BurnVerdict> {
    if s.is_empty() {
        return Ok(BurnVerdict::NoSources);
    }
    let trace = simulate(t, s)?;
    for (idx, step) in trace.steps.iter().enumerate() {
        if step.newly_ignited.is_none() {
            return Ok(BurnVerdict::SourceAlreadyBurned {
                step: idx + 1,
                vertex: s.sources()[idx],
            });
        }
    }
    let last = trace.burned_after.last().expect("nonempty sequence");
    if last.len() != t.n() {
        let burned: std::collections::HashSet<usize> = last.iter().copied().collect();
        let unburned = (0..t.n()).filter(|v| !burned.contains(v)).collect();
        return Ok(BurnVerdict::UnburnedRemain { unburned });
    }
    Ok(BurnVerdict::Valid)
}

/// Cover characterization: `∪ N_{k-i}[x_i] = V` and `d(x_i, x_j) ≥ j - i` for
/// all `i < j`. Equivalent to [`is_valid_burning`] returning `Valid`.
pub fn is_valid_cover(t: &Tree, s: &BurningSequence) -> Result<bool> {
    for &v in s.sources() {
        t.check_vertex(v)?;
    }
    let k = s.len();
    if k == 0 {
        return Ok(false);
    }
    let n = t.n();
    let dist_rows: Vec<Vec<usize>> = s
        .sources()
        .iter()
        .map(|&x| bfs_dist(t, x).into_iter().map(|d| d.unwrap()).collect())
        .collect();
    let mut covered = vec![false; n];
    for (i, row) in dist_rows.iter().enumerate() {
        let radius = k - (i + 1);
        for v in 0..n {
            if row[v] <= radius {
                covered[v] = true;
            }
        }
    }
    if covered.iter().any(|c| !c) {
        return Ok(false);
    }
    for (i, row) in dist_rows.iter().enumerate() {
        for j in (i + 1)..k {
            if row[s.sources()[j]] < j - i {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Extends `s` to at most `k` steps by igniting the smallest-id unburned
/// vertex at each added step. Stops early once the tree is fully burned, so
/// the result may be shorter than `k`. The given prefix must itself be
/// strictly valid as far as it goes (every source fresh when ignited).
pub fn pad_sequence(t: &Tree, s: &BurningSequence, k: usize) -> Result<BurningSequence> {
    if k < s.len() {
        return Err(Error::BadParam(format!(
            "target length {k} is below the current length {}",
            s.len()
        )));
    }
    let trace = simulate(t, s)?;
    for (idx, step) in trace.steps.iter().enumerate() {
        if step.newly_ignited.is_none() {
            return Err(Error::BadParam(format!(
                "prefix source {} at step {} is already burned",
                s.sources()[idx],
                idx + 1
            )));
        }
    }
    let planned: Vec<(usize, usize)> = s
        .sources()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 1, v))
        .collect();
    assemble(t, &planned, k, false)
}

/// Runs the process with sources planned at specific 1-based steps, padding
/// unplanned steps with the smallest unburned vertex. A planned source that
/// is fresh at the start of its step is ignited verbatim; one that is not is
/// replaced the same way when `repair` is set (its ball is dominated by the
/// earlier source that burned it, so plan coverage is preserved). Stops as
/// soon as the tree is fully burned. The result is strictly valid by
/// construction; `Internal` signals a plan that ran out of steps.
pub(crate) fn assemble(
    t: &Tree,
    planned: &[(usize, usize)],
    k: usize,
    repair: bool,
) -> Result<BurningSequence> {
    let n = t.n();
    let mut by_step = vec![None; k + 1];
    for &(pos, v) in planned {
        if pos == 0 || pos > k {
            return Err(Error::Internal(format!("planned step {pos} outside 1..={k}")));
        }
        t.check_vertex(v)?;
        if by_step[pos].replace(v).is_some() {
            return Err(Error::Internal(format!("two sources planned for step {pos}")));
        }
    }
    let mut burned = vec![false; n];
    let mut burned_count = 0usize;
    let mut frontier: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    // Smallest never-burned vertex; scans forward only, so amortized O(n).
    let mut cursor = 0usize;
    for (step, &planned_now) in by_step.iter().enumerate().skip(1) {
        // Freshness is judged against the set before this step's spread.
        let planned_fresh = planned_now.map(|v| !burned[v]);
        let mut spread = Vec::new();
        for &u in &frontier {
            for &w in t.adj(u) {
                if !burned[w] {
                    burned[w] = true;
                    burned_count += 1;
                    spread.push(w);
                }
            }
        }
        spread.sort_unstable();
        let x = match (planned_now, planned_fresh) {
            (Some(v), Some(true)) => v,
            (Some(v), Some(false)) if !repair => {
                return Err(Error::Internal(format!(
                    "planned source {v} at step {step} is already burned"
                )))
            }
            // Repair or pad: take the smallest never-burned vertex, falling
            // back to a vertex spread this very step (still fresh at step
            // start, so legal, though its ball is already promised).
            _ => {
                while cursor < n && burned[cursor] {
                    cursor += 1;
                }
                match (cursor < n, spread.first()) {
                    (true, _) => cursor,
                    (false, Some(&v)) => v,
                    (false, None) => {
                        return Err(Error::Internal(format!(
                            "no fresh vertex available at step {step}"
                        )))
                    }
                }
            }
        };
        if !burned[x] {
            burned[x] = true;
            burned_count += 1;
            frontier = spread;
            frontier.push(x);
        } else {
            frontier = spread;
        }
        out.push(x);
        if burned_count == n {
            return BurningSequence::new(out);
        }
    }
    Err(Error::Internal(format!(
        "plan did not burn the tree within {k} steps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::tree::build_tree;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Tree {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        build_tree(n, &edges).unwrap()
    }

    fn seq(v: &[usize]) -> BurningSequence {
        BurningSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sequence_rejects_duplicates() {
        assert!(BurningSequence::new(vec![1, 2, 1]).is_err());
        assert!(BurningSequence::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn p3_center_needs_two_steps() {
        let t = path(3);
        let trace = simulate(&t, &seq(&[1])).unwrap();
        assert_eq!(trace.fully_burned_at, None);
        assert_eq!(trace.burned_after, vec![vec![1]]);
        let trace = simulate(&t, &seq(&[1, 0])).unwrap();
        assert_eq!(trace.fully_burned_at, Some(2));
        assert_eq!(trace.steps[1].newly_spread, vec![0, 2]);
        // 0 was fresh at the start of step 2 even though spreading reached it.
        assert_eq!(trace.steps[1].newly_ignited, Some(0));
        assert!(is_valid_burning(&t, &seq(&[1, 0])).unwrap().valid());
        assert!(is_valid_cover(&t, &seq(&[1, 0])).unwrap());
    }

    #[test]
    fn p9_classic_witness() {
        // Balls of radius 2, 1, 0 tile the path as 5 + 3 + 1.
        let t = path(9);
        let s = seq(&[5, 1, 8]);
        let trace = simulate(&t, &s).unwrap();
        assert_eq!(trace.fully_burned_at, Some(3));
        assert!(is_valid_burning(&t, &s).unwrap().valid());
        assert!(is_valid_cover(&t, &s).unwrap());
        // Overlapping balls leave 0, 1, 7 unreached.
        let bad = seq(&[4, 5, 8]);
        assert!(!is_valid_cover(&t, &bad).unwrap());
        assert!(!is_valid_burning(&t, &bad).unwrap().valid());
        // Full coverage but a spacing violation: on P_4, (1, 3, 2) covers via
        // the radius-2 ball alone, yet d(1, 2) = 1 < 2 means the spread burns
        // vertex 2 before its turn.
        let t4 = path(4);
        let bad = seq(&[1, 3, 2]);
        assert!(!is_valid_cover(&t4, &bad).unwrap());
        assert_eq!(
            is_valid_burning(&t4, &bad).unwrap(),
            BurnVerdict::SourceAlreadyBurned { step: 3, vertex: 2 }
        );
    }

    #[test]
    fn verdict_variants() {
        let t = path(4);
        assert_eq!(
            is_valid_burning(&t, &seq(&[])).unwrap(),
            BurnVerdict::NoSources
        );
        // One step burns only the source itself: B_1 = {0}.
        assert_eq!(
            is_valid_burning(&t, &seq(&[0])).unwrap(),
            BurnVerdict::UnburnedRemain {
                unburned: vec![1, 2, 3]
            }
        );
        let t3 = path(3);
        assert_eq!(
            is_valid_burning(&t3, &seq(&[1, 0, 2])).unwrap(),
            BurnVerdict::SourceAlreadyBurned { step: 3, vertex: 2 }
        );
        assert!(!is_valid_cover(&t3, &seq(&[1, 0, 2])).unwrap());
    }

    #[test]
    fn strict_validity_forces_exact_finish() {
        // A strictly valid sequence cannot outlive the burn: the next source
        // would have nothing fresh to ignite.
        let t = path(5);
        let s = seq(&[2, 0, 4]);
        let trace = simulate(&t, &s).unwrap();
        assert_eq!(trace.fully_burned_at, Some(3));
        assert!(is_valid_burning(&t, &s).unwrap().valid());
    }

    #[test]
    fn pad_extends_to_target_or_full_burn() {
        let t = gen::perfect_binary(2).unwrap().into_tree();
        let padded = pad_sequence(&t, &seq(&[0]), 3).unwrap();
        assert_eq!(padded.len(), 3);
        assert!(is_valid_burning(&t, &padded).unwrap().valid());
        // Root alone finishes a height-2 perfect tree in 3 steps; asking for
        // more cannot make the sequence longer than the burn.
        let padded = pad_sequence(&t, &seq(&[0]), 7).unwrap();
        assert_eq!(padded.len(), 3);
        assert!(pad_sequence(&t, &seq(&[0, 1]), 1).is_err());
    }

    #[test]
    fn assemble_fills_gaps_and_repairs() {
        // Plan only steps 1 and 3 on P_7; step 2 gets padded with the
        // smallest never-burned vertex (0), whose radius-1 ball closes the
        // gap the plan leaves.
        let t = path(7);
        let s = assemble(&t, &[(1, 4), (3, 6)], 3, false).unwrap();
        assert_eq!(s.sources(), &[4, 0, 6]);
        assert!(is_valid_burning(&t, &s).unwrap().valid());
        // A plan whose later source gets pre-burned is repaired.
        let t = path(9);
        let s = assemble(&t, &[(1, 4), (3, 3)], 4, true).unwrap();
        assert!(is_valid_burning(&t, &s).unwrap().valid());
        // Without repair the same plan is an error.
        assert!(assemble(&t, &[(1, 4), (3, 3)], 4, false).is_err());
    }

    #[test]
    fn validators_agree_on_permutation_counterexample() {
        // Igniting every vertex in an arbitrary order is not automatically
        // valid: later sources are often already burned.
        let t = path(3);
        for order in [[0, 1, 2], [1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let s = seq(&order);
            let strict = is_valid_burning(&t, &s).unwrap().valid();
            let cover = is_valid_cover(&t, &s).unwrap();
            assert_eq!(strict, cover, "order {order:?}");
        }
        assert!(is_valid_burning(&t, &seq(&[0, 1, 2])).unwrap().valid());
        assert!(!is_valid_burning(&t, &seq(&[1, 0, 2])).unwrap().valid());
    }

    proptest! {
        #[test]
        fn validators_are_equivalent(tree_seed in 0u64..300, pick_seed in 0u64..20, n in 1usize..14) {
            let rv = gen::random_tree(n, tree_seed).unwrap();
            let t = rv.tree();
            let mut rng = ChaCha8Rng::seed_from_u64(pick_seed ^ (tree_seed << 8));
            let len = rng.random_range(1..=n.min(6));
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(&mut rng);
            let s = BurningSequence::new(ids[..len].to_vec()).unwrap();
            let strict = is_valid_burning(t, &s).unwrap().valid();
            let cover = is_valid_cover(t, &s).unwrap();
            prop_assert_eq!(strict, cover);
        }

        #[test]
        fn burned_sets_grow(tree_seed in 0u64..100, n in 2usize..20) {
            let rv = gen::random_tree(n, tree_seed).unwrap();
            let t = rv.tree();
            let s = BurningSequence::new(vec![0]).unwrap();
            let padded = pad_sequence(t, &s, n).unwrap();
            let trace = simulate(t, &padded).unwrap();
            for w in trace.burned_after.windows(2) {
                prop_assert!(w[0].iter().all(|v| w[1].contains(v)));
                prop_assert!(w[0].len() < w[1].len());
            }
            prop_assert!(trace.fully_burned_at.is_some());
        }

        #[test]
        fn padding_preserves_validity(tree_seed in 0u64..100, n in 1usize..20) {
            let rv = gen::random_tree(n, tree_seed).unwrap();
            let t = rv.tree();
            let padded = pad_sequence(t, &BurningSequence::new(vec![n / 2]).unwrap(), n).unwrap();
            prop_assert!(is_valid_burning(t, &padded).unwrap().valid());
            prop_assert!(is_valid_cover(t, &padded).unwrap());
        }
    }
}
