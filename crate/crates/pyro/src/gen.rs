//! Deterministic generators for the tree families the bounds target.
//!
//! Every randomized generator takes an explicit `u64` seed and uses ChaCha8,
//! so corpora are reproducible across platforms. Vertex ids are assigned in
//! generation order (level order for the explicit families).

use crate::burn::BurningSequence;
use crate::tree::{build_tree, RootedView, Tree};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Perfect binary tree of height `h`, level-order ids, rooted at 0.
pub fn perfect_binary(h: usize) -> Result<RootedView> {
    if h > 24 {
        return Err(Error::BadParam("height above 24 is unsupported".into()));
    }
    let n = (1usize << (h + 1)) - 1;
    let edges: Vec<(usize, usize)> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    RootedView::new(build_tree(n, &edges)?, 0)
}

/// Complete binary tree of height `h` with `leaves` vertices on the last
/// level, packed left, heap ids, rooted at 0. Strictly incomplete: `leaves`
/// must be in `1..2^h - 1` inclusive, so the perfect tree is excluded.
pub fn complete_binary(h: usize, leaves: usize) -> Result<RootedView> {
    if h == 0 || h > 24 {
        return Err(Error::BadParam("height must be in 1..=24".into()));
    }
    let cap = 1usize << h;
    if leaves == 0 || leaves >= cap {
        return Err(Error::BadParam(format!(
            "last level of height {h} holds 1..={} leaves for a strictly incomplete tree",
            cap - 1
        )));
    }
    let n = cap - 1 + leaves;
    let edges: Vec<(usize, usize)> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    RootedView::new(build_tree(n, &edges)?, 0)
}

/// Uniform leaf-growth full binary tree: repeatedly give two children to a
/// random leaf. `n` must be odd. Rooted at 0.
pub fn random_full_binary(n: usize, seed: u64) -> Result<RootedView> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grow_full(n, &mut rng)
}

fn grow_full(n: usize, rng: &mut ChaCha8Rng) -> Result<RootedView> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::BadParam("a full binary tree has odd order".into()));
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut leaves = vec![0usize];
    let mut size = 1usize;
    while size < n {
        let pick = rng.random_range(0..leaves.len());
        let v = leaves.swap_remove(pick);
        edges.push((v, size));
        edges.push((v, size + 1));
        leaves.push(size);
        leaves.push(size + 1);
        size += 2;
    }
    RootedView::new(build_tree(n, &edges)?, 0)
}

/// Random full binary tree that is not perfect. `n` must be odd and at least
/// 5; regenerates (up to 64 draws from the same stream) if a perfect shape
/// comes up, which is only possible when `n = 2^(h+1) - 1`.
pub fn random_fbtnp(n: usize, seed: u64) -> Result<RootedView> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::BadParam(
            "a full binary non-perfect tree has odd order at least 5".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let rv = grow_full(n, &mut rng)?;
        if !is_perfect_view(&rv) {
            return Ok(rv);
        }
    }
    Err(Error::RetriesExhausted)
}

fn is_perfect_view(rv: &RootedView) -> bool {
    let h = rv.height();
    (0..rv.tree().n()).all(|v| {
        let leaf = rv.children(v).is_empty();
        leaf == (rv.depth(v) == h) && (leaf || rv.children(v).len() == 2)
    })
}

/// Random tree in which every internal vertex has between 2 and `k`
/// children: leaf growth with the child count drawn so the remaining vertex
/// budget never strands a single vertex. `k = 2` forces odd `n`. Rooted at 0.
pub fn random_3k_ary(n: usize, k: usize, seed: u64) -> Result<RootedView> {
    if k < 2 {
        return Err(Error::BadParam("arity bound k must be at least 2".into()));
    }
    if n < 3 {
        return Err(Error::BadParam("order must be at least 3".into()));
    }
    if k == 2 && n.is_multiple_of(2) {
        return Err(Error::BadParam("k = 2 forces odd order".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves = vec![0usize];
    let mut size = 1usize;
    while size < n {
        let remaining = n - size;
        let choices: Vec<usize> = (2..=k.min(remaining))
            .filter(|&c| c != remaining - 1)
            .collect();
        // remaining >= 2 always leaves a choice except remaining == 3 with
        // k == 2, which the parity precondition rules out.
        let c = match choices.len() {
            0 => {
                return Err(Error::Internal(format!(
                    "no feasible child count for remaining {remaining} with k {k}"
                )))
            }
            1 => choices[0],
            len => choices[rng.random_range(0..len)],
        };
        let pick = rng.random_range(0..leaves.len());
        let v = leaves.swap_remove(pick);
        for j in 0..c {
            edges.push((v, size + j));
            leaves.push(size + j);
        }
        size += c;
    }
    RootedView::new(build_tree(n, &edges)?, 0)
}

/// Path on `n` vertices with ids in order, rooted at 0.
pub fn path(n: usize) -> Result<RootedView> {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    RootedView::new(build_tree(n, &edges)?, 0)
}

/// Uniform random labeled tree (decoded from a random Pruefer sequence),
/// rooted at 0.
pub fn random_tree(n: usize, seed: u64) -> Result<RootedView> {
    if n == 0 {
        return Err(Error::BadParam("vertex count must be at least 1".into()));
    }
    if n == 1 {
        return RootedView::new(build_tree(1, &[])?, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.random_range(0..n))
        .collect();
    let mut degree = vec![1usize; n];
    for &x in &code {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &code {
        let leaf = *leaves.iter().next().expect("a leaf always remains");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let mut rest = leaves.into_iter();
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    RootedView::new(build_tree(n, &edges)?, 0)
}

/// Extremal chain of paired perfect trees whose burning number is exactly the
/// component count `k`: component `i < k` joins a perfect tree of height
/// `k - i` (rooted at the designated source `v_i`) to a perfect tree of
/// height `k - i - 1`; component `k` is a single vertex. Components chain
/// through the smallest-id vertex at distance exactly `k - i` from `v_i`, so
/// the balls `N_{k-i}[v_i]` partition the vertex set. Returns the tree rooted
/// at the first component's joint together with the witness `(v_1, .., v_k)`.
pub fn prop1_maximal(k: usize) -> Result<(RootedView, BurningSequence)> {
    if !(2..=20).contains(&k) {
        return Err(Error::BadParam("component count must be in 2..=20".into()));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next_id = 0usize;
    // Appends a perfect tree of the given height, returns its root id.
    fn add_perfect(h: usize, next_id: &mut usize, edges: &mut Vec<(usize, usize)>) -> usize {
        let base = *next_id;
        let m = (1usize << (h + 1)) - 1;
        for i in 1..m {
            edges.push((base + (i - 1) / 2, base + i));
        }
        *next_id += m;
        base
    }
    let mut sources = Vec::with_capacity(k);
    let mut joints = Vec::with_capacity(k);
    let mut spans = Vec::with_capacity(k);
    for i in 1..=k {
        let start = next_id;
        let v = if i < k {
            let v = add_perfect(k - i, &mut next_id, &mut edges);
            let v_prime = add_perfect(k - i - 1, &mut next_id, &mut edges);
            edges.push((v, v_prime));
            v
        } else {
            let v = next_id;
            next_id += 1;
            v
        };
        sources.push(v);
        spans.push(start..next_id);
    }
    let n = next_id;
    // Distances inside the still-disconnected forest: BFS over the raw edge
    // list, one source per component.
    let mut adj = vec![Vec::new(); n];
    for &(u, w) in &edges {
        adj[u].push(w);
        adj[w].push(u);
    }
    for (idx, &v) in sources.iter().enumerate() {
        let radius = k - (idx + 1);
        let mut dist = vec![None; n];
        dist[v] = Some(0usize);
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[u].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        let joint = spans[idx]
            .clone()
            .find(|&w| dist[w] == Some(radius))
            .expect("each component has a vertex at the exact radius");
        joints.push(joint);
    }
    for w in joints.windows(2) {
        edges.push((w[0], w[1]));
    }
    let t = build_tree(n, &edges)?;
    let rv = RootedView::new(t, joints[0])?;
    let witness = BurningSequence::new(sources)?;
    debug_assert!(crate::burn::is_valid_cover(rv.tree(), &witness).unwrap());
    Ok((rv, witness))
}

/// How a vertex of an augmented tree maps back to the input tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum AugVertex {
    Original(usize),
    /// A pendant added below the given original vertex.
    PendantOf(usize),
}

/// Adds a pendant leaf below every vertex of degree exactly 2, except the
/// given root when the root itself has degree 2. New ids start at `n` in
/// ascending order of their attachment vertex. Returns the augmented tree
/// and the id mapping.
pub fn augment_degree2(t: &Tree, root: usize) -> Result<(Tree, Vec<AugVertex>)> {
    t.check_vertex(root)?;
    let n = t.n();
    let mut mapping: Vec<AugVertex> = (0..n).map(AugVertex::Original).collect();
    let mut edges: Vec<(usize, usize)> = t.edges().to_vec();
    let mut next = n;
    for v in 0..n {
        if t.degree(v) == 2 && !(v == root && t.degree(root) == 2) {
            edges.push((v, next));
            mapping.push(AugVertex::PendantOf(v));
            next += 1;
        }
    }
    Ok((build_tree(next, &edges)?, mapping))
}

/// Serializable description of a generator invocation, for reproducible
/// corpora.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    Perfect { h: usize },
    Complete { h: usize, leaves: usize },
    FullRandom { n: usize, seed: u64 },
    FbtnpRandom { n: usize, seed: u64 },
    ThreeKAryRandom { n: usize, k: usize, seed: u64 },
    Path { n: usize },
    Prop1Maximal { k: usize },
    RandomTree { n: usize, seed: u64 },
}

impl GenSpec {
    pub fn from_json(text: &str) -> Result<GenSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

/// A generated tree plus, for the extremal family, its burning witness.
#[derive(Debug, Clone)]
pub struct GenOutput {
    pub rooted: RootedView,
    pub witness: Option<BurningSequence>,
}

/// Runs the generator a [`GenSpec`] describes.
pub fn generate(spec: &GenSpec) -> Result<GenOutput> {
    let (rooted, witness) = match *spec {
        GenSpec::Perfect { h } => (perfect_binary(h)?, None),
        GenSpec::Complete { h, leaves } => (complete_binary(h, leaves)?, None),
        GenSpec::FullRandom { n, seed } => (random_full_binary(n, seed)?, None),
        GenSpec::FbtnpRandom { n, seed } => (random_fbtnp(n, seed)?, None),
        GenSpec::ThreeKAryRandom { n, k, seed } => (random_3k_ary(n, k, seed)?, None),
        GenSpec::Path { n } => (path(n)?, None),
        GenSpec::Prop1Maximal { k } => {
            let (rv, w) = prop1_maximal(k)?;
            (rv, Some(w))
        }
        GenSpec::RandomTree { n, seed } => (random_tree(n, seed)?, None),
    };
    Ok(GenOutput { rooted, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burn::{is_valid_burning, is_valid_cover};
    use crate::tree::{bfs_dist, classify, classify_view};

    #[test]
    fn perfect_counts_and_shape() {
        for h in 0..=10 {
            let rv = perfect_binary(h).unwrap();
            assert_eq!(rv.tree().n(), (1 << (h + 1)) - 1);
            let c = classify_view(&rv).unwrap();
            assert!(c.is_perfect, "h={h}");
            assert_eq!(c.height, h);
        }
    }

    #[test]
    fn complete_counts_and_shape() {
        for h in 1..=8usize {
            for leaves in [1, (1 << h) / 2, (1 << h) - 1] {
                let rv = complete_binary(h, leaves).unwrap();
                assert_eq!(rv.tree().n(), (1 << h) - 1 + leaves);
                let c = classify_view(&rv).unwrap();
                assert!(c.is_complete && !c.is_perfect, "h={h} leaves={leaves}");
                assert_eq!(c.height, h);
            }
        }
        assert!(complete_binary(0, 1).is_err());
        assert!(complete_binary(3, 0).is_err());
        assert!(complete_binary(3, 8).is_err());
    }

    #[test]
    fn full_growth_is_full_and_deterministic() {
        for n in [1usize, 3, 5, 21, 99] {
            let rv = random_full_binary(n, 11).unwrap();
            assert_eq!(rv.tree().n(), n);
            let c = classify_view(&rv).unwrap();
            assert!(c.is_full, "n={n}");
        }
        assert!(random_full_binary(4, 0).is_err());
        let a = random_full_binary(41, 7).unwrap();
        let b = random_full_binary(41, 7).unwrap();
        assert_eq!(a.tree(), b.tree());
        let c = random_full_binary(41, 8).unwrap();
        assert_ne!(a.tree(), c.tree());
    }

    #[test]
    fn fbtnp_is_never_perfect() {
        for seed in 0..20 {
            for n in [5usize, 7, 15, 31, 63] {
                let rv = random_fbtnp(n, seed).unwrap();
                let c = classify_view(&rv).unwrap();
                assert!(c.is_fbtnp, "n={n} seed={seed}");
            }
        }
        assert!(random_fbtnp(3, 0).is_err());
        assert!(random_fbtnp(6, 0).is_err());
    }

    #[test]
    fn three_k_ary_respects_bounds() {
        for seed in 0..10 {
            for (n, k) in [(3usize, 2usize), (9, 2), (10, 3), (25, 4), (60, 5)] {
                let rv = random_3k_ary(n, k, seed).unwrap();
                assert_eq!(rv.tree().n(), n);
                let c = classify_view(&rv).unwrap();
                assert!(c.is_3k_ary(k), "n={n} k={k} seed={seed}");
            }
        }
        assert!(random_3k_ary(8, 2, 0).is_err());
        assert!(random_3k_ary(9, 1, 0).is_err());
        assert!(random_3k_ary(2, 3, 0).is_err());
    }

    #[test]
    fn extremal_family_counts_partition_and_witness() {
        for k in 2..=10usize {
            let (rv, witness) = prop1_maximal(k).unwrap();
            let t = rv.tree();
            assert_eq!(t.n(), 3 * ((1 << k) - 1) - 2 * k, "k={k}");
            let c = classify_view(&rv).unwrap();
            assert!(c.is_fbtnp, "k={k}");
            assert_eq!(witness.len(), k);
            assert!(is_valid_cover(t, &witness).unwrap());
            assert!(is_valid_burning(t, &witness).unwrap().valid());
            // The balls around the witness partition the vertex set.
            let mut owner = vec![None; t.n()];
            for (idx, &v) in witness.sources().iter().enumerate() {
                let radius = k - (idx + 1);
                for (w, d) in bfs_dist(t, v).iter().enumerate() {
                    if d.unwrap() <= radius {
                        assert!(owner[w].is_none(), "k={k}: vertex {w} covered twice");
                        owner[w] = Some(idx);
                    }
                }
            }
            assert!(owner.iter().all(|o| o.is_some()), "k={k}: cover misses vertices");
        }
        assert!(prop1_maximal(1).is_err());
    }

    #[test]
    fn augment_adds_pendants_except_degree2_root() {
        let p9 = path(9).unwrap().into_tree();
        // Root 1 has degree 2: the other six degree-2 vertices get pendants.
        let (t, map) = augment_degree2(&p9, 1).unwrap();
        assert_eq!(t.n(), 15);
        assert_eq!(map.len(), 15);
        assert_eq!(map[9], AugVertex::PendantOf(2));
        assert_eq!(map[14], AugVertex::PendantOf(7));
        assert_eq!(t.degree(1), 2);
        assert!((2..8).all(|v| t.degree(v) == 3));
        // Root 0 has degree 1: every degree-2 vertex gets a pendant.
        let (t, _) = augment_degree2(&p9, 0).unwrap();
        assert_eq!(t.n(), 16);
        // No degree-2 vertices: unchanged.
        let star = build_tree(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (t, map) = augment_degree2(&star, 0).unwrap();
        assert_eq!(t.n(), 4);
        assert_eq!(map.len(), 4);
        let full = perfect_binary(2).unwrap();
        let (t, _) = augment_degree2(full.tree(), 0).unwrap();
        assert_eq!(t.n(), 7);
    }

    #[test]
    fn prufer_trees_are_uniformly_varied_and_deterministic() {
        let a = random_tree(30, 3).unwrap();
        let b = random_tree(30, 3).unwrap();
        assert_eq!(a.tree(), b.tree());
        let c = random_tree(30, 4).unwrap();
        assert_ne!(a.tree(), c.tree());
        assert_eq!(random_tree(1, 0).unwrap().tree().n(), 1);
        assert_eq!(random_tree(2, 0).unwrap().tree().edges(), &[(0, 1)]);
    }

    #[test]
    fn genspec_json_roundtrip_and_dispatch() {
        let spec = GenSpec::from_json(r#"{"family":"complete","h":3,"leaves":5}"#).unwrap();
        assert_eq!(
            spec,
            GenSpec::Complete { h: 3, leaves: 5 }
        );
        let out = generate(&spec).unwrap();
        assert_eq!(out.rooted.tree().n(), 12);
        assert!(out.witness.is_none());
        let spec = GenSpec::from_json(r#"{"family":"prop1_maximal","k":3}"#).unwrap();
        let out = generate(&spec).unwrap();
        assert_eq!(out.rooted.tree().n(), 15);
        assert_eq!(out.witness.unwrap().len(), 3);
        assert!(GenSpec::from_json(r#"{"family":"nope"}"#).is_err());
        let text = serde_json::to_string(&GenSpec::Path { n: 9 }).unwrap();
        assert_eq!(text, r#"{"family":"path","n":9}"#);
    }

    #[test]
    fn classify_matches_generated_families() {
        let rv = random_3k_ary(25, 4, 1).unwrap();
        let c = classify(rv.tree(), rv.root()).unwrap();
        assert!(c.max_children <= 4);
        let rv = path(6).unwrap();
        let c = classify_view(&rv).unwrap();
        assert_eq!((c.height, c.n2), (5, 4));
    }
}
