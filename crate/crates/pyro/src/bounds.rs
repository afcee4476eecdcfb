//! Constructive burning schedules with certified step bounds.
//!
//! Each burner returns a [`BoundResult`]: a strictly valid burning sequence,
//! the bound its construction certifies on this input, and (for the
//! engine-backed bounds) the per-iteration audit trail. `steps_used` never
//! exceeds `claimed_bound`; sequences stop as soon as the tree is fully
//! burned, so they may be shorter than the claim.

use serde::Serialize;

use crate::burn::{assemble, pad_sequence, BurningSequence};
use crate::gen::{augment_degree2, AugVertex};
use crate::peel::{plan_burning, EngineMode, IterationAudit};
use crate::tree::{classify_view, Classification, RootedView, Tree};
use crate::{ceil_sqrt, Error, Result};

/// A valid burning sequence together with the bound it certifies.
#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    pub sequence: BurningSequence,
    /// The bound formula evaluated on this input.
    pub claimed_bound: usize,
    /// Which construction produced the sequence.
    pub bound_name: String,
    /// Effective length; at most `claimed_bound`.
    pub steps_used: usize,
    /// Engine iterations, empty for the closed-form burners.
    pub audit: Vec<IterationAudit>,
}

fn result(
    sequence: BurningSequence,
    claimed: usize,
    name: &str,
    audit: Vec<IterationAudit>,
) -> BoundResult {
    BoundResult {
        steps_used: sequence.len(),
        sequence,
        claimed_bound: claimed,
        bound_name: name.to_owned(),
        audit,
    }
}

/// Exact burning number by shape, when one of the closed forms applies:
/// perfect binary trees (`h + 1`), complete binary trees one leaf short of
/// perfect (`h + 1`), and complete binary trees missing at least two leaves
/// (`h`). Returns the value with a tag naming the rule.
pub fn closed_form(rv: &RootedView) -> Option<(usize, &'static str)> {
    let c = classify_view(rv).ok()?;
    if c.is_perfect {
        return Some((c.height + 1, "perfect-height"));
    }
    if c.is_complete {
        let h = c.height;
        let missing = (1usize << h) - (rv.tree().n() - ((1usize << h) - 1));
        return Some(if missing == 1 {
            (h + 1, "complete-near-perfect")
        } else {
            (h, "complete-short")
        });
    }
    None
}

/// Burn a perfect binary tree in exactly `h + 1` steps from its root.
pub fn burn_perfect(rv: &RootedView) -> Result<BoundResult> {
    let c = classify_view(rv)?;
    if !c.is_perfect {
        return Err(Error::NotPerfect);
    }
    let k = c.height + 1;
    let seq = pad_sequence(rv.tree(), &BurningSequence::new(vec![rv.root()])?, k)?;
    Ok(result(seq, k, "perfect-height", vec![]))
}

/// Burn a complete-but-not-perfect binary tree.
///
/// One missing leaf forces `h + 1` steps (root first). With two or more
/// leaves missing, some next-to-last-level vertex is childless; igniting the
/// opposite root child first and then the siblings down the spine towards
/// that vertex finishes in `h` steps.
pub fn burn_complete(rv: &RootedView) -> Result<BoundResult> {
    let c = classify_view(rv)?;
    if c.is_perfect {
        return Err(Error::IsPerfect);
    }
    if !c.is_complete {
        return Err(Error::NotComplete);
    }
    let t = rv.tree();
    let h = c.height;
    let missing = (1usize << h) - (t.n() - ((1usize << h) - 1));
    if missing == 1 {
        let seq = pad_sequence(t, &BurningSequence::new(vec![rv.root()])?, h + 1)?;
        return Ok(result(seq, h + 1, "complete-near-perfect", vec![]));
    }
    let w = (0..t.n())
        .find(|&v| rv.depth(v) == h - 1 && rv.children(v).is_empty())
        .ok_or_else(|| Error::Internal("childless fringe vertex must exist".into()))?;
    let mut spine = vec![w];
    let mut cur = w;
    while rv.depth(cur) > 1 {
        cur = rv.parent(cur).expect("above the root");
        spine.push(cur);
    }
    spine.reverse();
    let first = *rv
        .children(rv.root())
        .iter()
        .find(|&&x| x != spine[0])
        .expect("root has two children");
    let mut planned = vec![(1usize, first)];
    for i in 2..h {
        let x = *rv
            .children(spine[i - 2])
            .iter()
            .find(|&&x| x != spine[i - 1])
            .expect("internal levels are full");
        planned.push((i, x));
    }
    planned.push((h, w));
    let seq = assemble(t, &planned, h, false)?;
    Ok(result(seq, h, "complete-short", vec![]))
}

/// Burn a full-but-not-perfect binary tree in at most `h` steps by igniting
/// the root of a tallest child subtree and recursing into the other child.
pub fn burn_fbtnp_height(rv: &RootedView) -> Result<BoundResult> {
    let c = classify_view(rv)?;
    if !c.is_fbtnp {
        return Err(Error::NotFbtnp);
    }
    let t = rv.tree();
    let n = t.n();
    let mut by_depth: Vec<usize> = (0..n).collect();
    by_depth.sort_by_key(|&v| std::cmp::Reverse(rv.depth(v)));
    let mut size = vec![1usize; n];
    let mut height = vec![0usize; n];
    for &v in &by_depth {
        if let Some(p) = rv.parent(v) {
            size[p] += size[v];
            height[p] = height[p].max(height[v] + 1);
        }
    }
    // A full subtree is perfect exactly when its order fills its height;
    // past the word size that order is unreachable.
    let perfect = |v: usize| {
        height[v] + 1 < usize::BITS as usize && size[v] == (1usize << (height[v] + 1)) - 1
    };
    let mut planned = Vec::new();
    let mut cur = rv.root();
    let mut pos = 1usize;
    loop {
        if perfect(cur) {
            planned.push((pos, cur));
            break;
        }
        let kids = rv.children(cur);
        debug_assert_eq!(kids.len(), 2, "full tree");
        let (a, b) = (kids[0], kids[1]);
        let want = height[cur] - 1;
        let tall = match (height[a] == want, height[b] == want) {
            (true, false) => a,
            (false, true) => b,
            // Both children reach full height; descend into a non-perfect
            // one so the height invariant survives the recursion.
            _ => {
                debug_assert!(!(perfect(a) && perfect(b)), "parent would be perfect");
                if perfect(a) {
                    a
                } else if perfect(b) {
                    b
                } else {
                    a
                }
            }
        };
        let rest = if tall == a { b } else { a };
        planned.push((pos, tall));
        cur = rest;
        pos += 1;
    }
    let seq = assemble(t, &planned, c.height, false)?;
    Ok(result(seq, c.height, "full-height", vec![]))
}

fn engine_eligibility(c: &Classification) -> Result<()> {
    if c.is_perfect {
        return Err(Error::NotEligible(
            "a perfect tree burns exactly in height + 1 steps".into(),
        ));
    }
    if !c.is_fbtnp && !c.min_internal_children.is_some_and(|m| m >= 2) {
        return Err(Error::NotEligible(
            "every internal vertex needs at least two children".into(),
        ));
    }
    Ok(())
}

/// Burn an eligible tree in at most `ceil(sqrt(n))` steps with the basic
/// peeling schedule.
///
/// Eligible inputs are full-but-not-perfect binary trees and, more
/// generally, any non-perfect tree whose internal vertices all have at
/// least two children.
pub fn burn_fbtnp_sqrt_n(rv: &RootedView) -> Result<BoundResult> {
    let c = classify_view(rv)?;
    engine_eligibility(&c)?;
    let t = rv.tree();
    let k = ceil_sqrt(t.n());
    let (planned, audit) = plan_burning(t, rv.root(), k, EngineMode::Sqrt)?;
    let seq = assemble(t, &planned, k, true)?;
    Ok(result(seq, k, "sqrt-order", audit))
}

/// Burn an eligible tree in at most `ceil(sqrt(n + 9)) - 1` steps with the
/// refined peeling schedule; below 18 vertices the refinement buys nothing,
/// so the basic schedule runs instead.
pub fn burn_fbtnp_improved(rv: &RootedView) -> Result<BoundResult> {
    let c = classify_view(rv)?;
    engine_eligibility(&c)?;
    let t = rv.tree();
    let n = t.n();
    if n <= 17 {
        let k = ceil_sqrt(n);
        let (planned, audit) = plan_burning(t, rv.root(), k, EngineMode::Sqrt)?;
        let seq = assemble(t, &planned, k, true)?;
        return Ok(result(seq, k, "sqrt-order", audit));
    }
    let k = ceil_sqrt(n + 9) - 1;
    let (planned, audit) = plan_burning(t, rv.root(), k, EngineMode::Improved)?;
    let seq = assemble(t, &planned, k, true)?;
    Ok(result(seq, k, "improved-sqrt", audit))
}

/// Burn an arbitrary tree in at most `ceil(sqrt(n + n2 + 8)) - 1` steps,
/// where `n2` counts degree-2 vertices.
///
/// Degree-2 vertices get a pendant each (except one kept as the root), which
/// makes the padded tree eligible for the refined schedule; pendant sources
/// are then replayed from their attachment vertices, which can only enlarge
/// the burned region within the original tree.
pub fn burn_general_tree(t: &Tree, root: usize) -> Result<BoundResult> {
    t.check_vertex(root)?;
    let n = t.n();
    let n2 = (0..n).filter(|&v| t.degree(v) == 2).count();
    let claimed = ceil_sqrt(n + n2 + 8) - 1;
    if n == 1 {
        let seq = BurningSequence::new(vec![root])?;
        return Ok(result(seq, claimed, "general-degree2", vec![]));
    }
    if n == 2 {
        let seq = BurningSequence::new(vec![root, 1 - root])?;
        return Ok(result(seq, claimed, "general-degree2", vec![]));
    }
    let (rho, padded, project): (usize, Tree, Vec<usize>) = if n2 >= 1 {
        let rho = if t.degree(root) == 2 {
            root
        } else {
            (0..n).find(|&v| t.degree(v) == 2).expect("n2 >= 1")
        };
        let (padded, mapping) = augment_degree2(t, rho)?;
        let project = mapping
            .iter()
            .map(|m| match *m {
                AugVertex::Original(v) => v,
                AugVertex::PendantOf(v) => v,
            })
            .collect();
        (rho, padded, project)
    } else {
        let rho = if t.degree(root) >= 2 { root } else { t.adj(root)[0] };
        (rho, t.clone(), (0..n).collect())
    };
    let rvp = RootedView::new(padded, rho)?;
    let cp = classify_view(&rvp)?;
    let (planned, audit) = if cp.is_perfect {
        // Pendant padding can produce a perfect tree (a three-vertex path
        // rooted at its middle, say); its root alone finishes well inside
        // the window.
        (vec![(1, rho)], Vec::new())
    } else if rvp.tree().n() <= 17 {
        plan_burning(rvp.tree(), rho, claimed, EngineMode::Sqrt)?
    } else {
        plan_burning(rvp.tree(), rho, claimed, EngineMode::Improved)?
    };
    let planned: Vec<(usize, usize)> =
        planned.into_iter().map(|(pos, v)| (pos, project[v])).collect();
    let seq = assemble(t, &planned, claimed, true)?;
    Ok(result(seq, claimed, "general-degree2", audit))
}

/// Coarser general-tree bounds, for comparison against
/// [`burn_general_tree`]'s claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComparisonBounds {
    /// `ceil(sqrt(2n + 6)) - 1`: uses only the order of the tree.
    pub order_only: usize,
    /// `ceil(sqrt(4n/3 + 8)) - 1`, available when degree-2 vertices make up
    /// at most a third of the tree.
    pub low_degree2: Option<usize>,
}

/// Evaluate the comparison formulas on a tree.
pub fn general_comparison_bounds(t: &Tree) -> ComparisonBounds {
    let n = t.n();
    let n2 = (0..n).filter(|&v| t.degree(v) == 2).count();
    let order_only = ceil_sqrt(2 * n + 6) - 1;
    let low_degree2 = (3 * n2 <= n).then(|| {
        // Smallest s with s^2 >= 4n/3 + 8, i.e. 3 s^2 >= 4n + 24.
        let mut s = ceil_sqrt((4 * n + 24) / 3);
        while 3 * s * s < 4 * n + 24 {
            s += 1;
        }
        s - 1
    });
    ComparisonBounds { order_only, low_degree2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burn::is_valid_burning;
    use crate::gen::{
        complete_binary, path, perfect_binary, prop1_maximal, random_3k_ary, random_fbtnp,
        random_tree,
    };
    use crate::tree::build_tree;

    fn assert_certified(rv_tree: &Tree, r: &BoundResult) {
        assert!(
            is_valid_burning(rv_tree, &r.sequence).unwrap().valid(),
            "{} must emit a valid sequence",
            r.bound_name
        );
        assert!(
            r.steps_used <= r.claimed_bound,
            "{}: {} steps exceed claim {}",
            r.bound_name,
            r.steps_used,
            r.claimed_bound
        );
        assert_eq!(r.steps_used, r.sequence.len());
    }

    #[test]
    fn perfect_takes_height_plus_one() {
        for h in 0..=5 {
            let rv = perfect_binary(h).unwrap();
            let r = burn_perfect(&rv).unwrap();
            assert_certified(rv.tree(), &r);
            assert_eq!(r.claimed_bound, h + 1);
            assert_eq!(r.steps_used, h + 1);
            assert_eq!(closed_form(&rv), Some((h + 1, "perfect-height")));
        }
    }

    #[test]
    fn perfect_burner_rejects_others() {
        let rv = complete_binary(2, 1).unwrap();
        assert!(matches!(burn_perfect(&rv), Err(Error::NotPerfect)));
    }

    #[test]
    fn complete_one_short_takes_height_plus_one() {
        for h in [2usize, 3, 4] {
            let rv = complete_binary(h, (1 << h) - 1).unwrap();
            let r = burn_complete(&rv).unwrap();
            assert_certified(rv.tree(), &r);
            assert_eq!(r.claimed_bound, h + 1);
            assert_eq!(closed_form(&rv), Some((h + 1, "complete-near-perfect")));
        }
    }

    #[test]
    fn complete_two_or_more_short_takes_height() {
        for (h, leaves) in [(2usize, 1usize), (2, 2), (3, 5), (3, 1), (4, 3)] {
            let rv = complete_binary(h, leaves).unwrap();
            let r = burn_complete(&rv).unwrap();
            assert_certified(rv.tree(), &r);
            assert_eq!(r.claimed_bound, h);
            assert_eq!(closed_form(&rv), Some((h, "complete-short")));
        }
    }

    #[test]
    fn complete_short_schedule_is_frozen() {
        // Heap layout: childless depth-2 vertex is 6, so the schedule starts
        // on the other root child and walks siblings toward it.
        let rv = complete_binary(3, 5).unwrap();
        let r = burn_complete(&rv).unwrap();
        assert_eq!(r.sequence.sources(), &[1, 5, 6]);
    }

    #[test]
    fn complete_burner_rejects_others() {
        assert!(matches!(
            burn_complete(&perfect_binary(2).unwrap()),
            Err(Error::IsPerfect)
        ));
        let rv = random_fbtnp(9, 3).unwrap();
        if !classify_view(&rv).unwrap().is_complete {
            assert!(matches!(burn_complete(&rv), Err(Error::NotComplete)));
        }
    }

    #[test]
    fn full_height_schedule_descends_the_tall_side() {
        // Root 0 with perfect child 1 (leaves 3, 4) and leaf child 2.
        let t = build_tree(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        let rv = RootedView::new(t, 0).unwrap();
        let r = burn_fbtnp_height(&rv).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, 2);
        assert_eq!(r.sequence.sources(), &[1, 2]);
    }

    #[test]
    fn full_height_bound_holds_on_random_inputs() {
        for seed in 0..6 {
            let rv = random_fbtnp(201, seed).unwrap();
            let c = classify_view(&rv).unwrap();
            let r = burn_fbtnp_height(&rv).unwrap();
            assert_certified(rv.tree(), &r);
            assert_eq!(r.claimed_bound, c.height);
        }
        assert!(matches!(
            burn_fbtnp_height(&perfect_binary(3).unwrap()),
            Err(Error::NotFbtnp)
        ));
    }

    #[test]
    fn sqrt_bound_matches_formula() {
        let rv = random_fbtnp(101, 17).unwrap();
        let r = burn_fbtnp_sqrt_n(&rv).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, 11);
        assert_eq!(r.bound_name, "sqrt-order");

        let (rv, _) = prop1_maximal(4).unwrap();
        assert_eq!(rv.tree().n(), 37);
        let r = burn_fbtnp_sqrt_n(&rv).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, 7);
    }

    #[test]
    fn engine_burners_reject_ineligible_inputs() {
        assert!(matches!(
            burn_fbtnp_sqrt_n(&perfect_binary(3).unwrap()),
            Err(Error::NotEligible(_))
        ));
        assert!(matches!(
            burn_fbtnp_improved(&path(5).unwrap()),
            Err(Error::NotEligible(_))
        ));
    }

    #[test]
    fn improved_bound_matches_formula_and_falls_back_when_small() {
        let rv = random_fbtnp(99, 23).unwrap();
        let r = burn_fbtnp_improved(&rv).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, 10);
        assert_eq!(r.bound_name, "improved-sqrt");

        let rv = random_fbtnp(17, 23).unwrap();
        let r = burn_fbtnp_improved(&rv).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, 5);
        assert_eq!(r.bound_name, "sqrt-order");
    }

    #[test]
    fn improved_bound_accepts_wider_arity() {
        for &(n, k) in &[(100, 3), (250, 4)] {
            let rv = random_3k_ary(n, k, 5).unwrap();
            let r = burn_fbtnp_improved(&rv).unwrap();
            assert_certified(rv.tree(), &r);
            assert_eq!(r.claimed_bound, ceil_sqrt(n + 9) - 1);
        }
    }

    #[test]
    fn general_bound_on_paths() {
        // 25 vertices, 23 of degree 2: claim is ceil(sqrt(56)) - 1 = 7.
        let rv = path(25).unwrap();
        let r = burn_general_tree(rv.tree(), rv.root()).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, 7);
        for n in 1..=30 {
            let rv = path(n).unwrap();
            let r = burn_general_tree(rv.tree(), rv.root()).unwrap();
            assert_certified(rv.tree(), &r);
        }
    }

    #[test]
    fn general_bound_is_identity_on_full_binary_trees() {
        // Only the root has degree 2, and it is kept as the engine root, so
        // padding changes nothing and the claim matches the refined formula.
        let rv = random_fbtnp(101, 29).unwrap();
        let r = burn_general_tree(rv.tree(), rv.root()).unwrap();
        assert_certified(rv.tree(), &r);
        assert_eq!(r.claimed_bound, ceil_sqrt(101 + 9) - 1);
    }

    #[test]
    fn general_bound_handles_no_degree_two_vertices() {
        // A star has no degree-2 vertex at or above three leaves.
        let edges: Vec<(usize, usize)> = (1..17).map(|v| (0, v)).collect();
        let t = build_tree(17, &edges).unwrap();
        let r = burn_general_tree(&t, 3).unwrap();
        assert_certified(&t, &r);
        assert_eq!(r.claimed_bound, 4);
    }

    #[test]
    fn general_bound_on_random_trees() {
        for seed in 0..20 {
            let rv = random_tree(40 + 7 * seed as usize, seed).unwrap();
            let r = burn_general_tree(rv.tree(), 0).unwrap();
            assert_certified(rv.tree(), &r);
        }
    }

    #[test]
    fn pendant_projection_keeps_coverage() {
        // Replaying a pendant source from its attachment vertex covers at
        // least the original-tree part of a pendant-centred ball.
        let rv = path(9).unwrap();
        let t = rv.tree();
        let (padded, mapping) = augment_degree2(t, 1).unwrap();
        for (v, entry) in mapping.iter().enumerate().skip(t.n()) {
            let AugVertex::PendantOf(a) = *entry else {
                panic!("padded ids are pendants");
            };
            for radius in 0..4 {
                for w in 0..t.n() {
                    let da = crate::tree::bfs_dist(&padded, v)[w].unwrap();
                    if da <= radius {
                        assert!(crate::tree::bfs_dist(t, a)[w].unwrap() <= radius);
                    }
                }
            }
        }
    }

    #[test]
    fn comparison_bounds_evaluate_their_formulas() {
        let rv = path(25).unwrap();
        let cb = general_comparison_bounds(rv.tree());
        assert_eq!(cb.order_only, ceil_sqrt(56) - 1);
        assert_eq!(cb.low_degree2, None, "23 of 25 vertices have degree 2");

        let rv = random_fbtnp(99, 31).unwrap();
        let cb = general_comparison_bounds(rv.tree());
        assert_eq!(cb.order_only, ceil_sqrt(2 * 99 + 6) - 1);
        let ld = cb.low_degree2.expect("one degree-2 vertex in 99");
        assert!(3 * (ld + 1) * (ld + 1) >= 4 * 99 + 24);
        assert!(3 * ld * ld < 4 * 99 + 24 || ld == 0);
    }

    #[test]
    fn closed_form_is_none_off_the_three_shapes() {
        assert_eq!(closed_form(&path(7).unwrap()), None);
        let rv = random_fbtnp(9, 3).unwrap();
        if !classify_view(&rv).unwrap().is_complete {
            assert_eq!(closed_form(&rv), None);
        }
    }
}
