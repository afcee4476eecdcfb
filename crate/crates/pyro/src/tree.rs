//! Tree representation, validation, metric queries, and classification.

use crate::{Error, Result};

/// An unrooted tree on vertices `0..n`.
///
/// Adjacency lists are sorted ascending; `edges` holds each edge once as
/// `(min, max)`, sorted. Construction via [`build_tree`] guarantees the edge
/// set is acyclic, connected, and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Tree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adj(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::BadVertexId { v, n: self.n })
        }
    }
}

/// Validates and builds a tree from an explicit edge list.
///
/// Checks, in order: vertex ids in range, no self-loops, no duplicate edges,
/// exactly `n - 1` edges (fewer means disconnected, more means a cycle), and
/// reachability of every vertex from vertex 0.
pub fn build_tree(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
    if n == 0 {
        return Err(Error::BadParam("vertex count must be at least 1".into()));
    }
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        if u >= n {
            return Err(Error::BadVertexId { v: u, n });
        }
        if v >= n {
            return Err(Error::BadVertexId { v, n });
        }
        if u == v {
            return Err(Error::HasCycle);
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge { u: key.0, v: key.1 });
        }
    }
    if edges.len() + 1 < n {
        return Err(Error::NotConnected);
    }
    if edges.len() + 1 > n {
        return Err(Error::HasCycle);
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut normalized: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    normalized.sort_unstable();
    let t = Tree {
        n,
        adj,
        edges: normalized,
    };
    // n - 1 edges and full reachability together rule out cycles.
    if bfs_dist(&t, 0).iter().any(|d| d.is_none()) {
        return Err(Error::NotConnected);
    }
    Ok(t)
}

/// BFS distances from `src`; `None` for unreachable vertices.
pub(crate) fn bfs_dist(t: &Tree, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; t.n];
    let mut queue = std::collections::VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in t.adj(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// BFS distances from `src` restricted to `alive` vertices.
pub(crate) fn bfs_dist_masked(t: &Tree, src: usize, alive: &[bool]) -> Vec<Option<usize>> {
    debug_assert!(alive[src]);
    let mut dist = vec![None; t.n];
    let mut queue = std::collections::VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in t.adj(u) {
            if alive[w] && dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Number of edges on the unique `u`-`v` path.
pub fn distance(t: &Tree, u: usize, v: usize) -> Result<usize> {
    t.check_vertex(u)?;
    t.check_vertex(v)?;
    Ok(bfs_dist(t, u)[v].expect("tree is connected"))
}

/// Vertices within distance `k` of `v`, sorted ascending (includes `v`).
pub fn closed_neighborhood(t: &Tree, v: usize, k: usize) -> Result<Vec<usize>> {
    t.check_vertex(v)?;
    let dist = bfs_dist(t, v);
    Ok((0..t.n)
        .filter(|&w| dist[w].expect("tree is connected") <= k)
        .collect())
}

/// Maximum distance from `v` to any vertex.
pub fn eccentricity(t: &Tree, v: usize) -> Result<usize> {
    t.check_vertex(v)?;
    Ok(bfs_dist(t, v)
        .into_iter()
        .map(|d| d.expect("tree is connected"))
        .max()
        .unwrap_or(0))
}

/// A subtree hanging off a diametral-path vertex.
///
/// `height` is measured from the path vertex, so a lone pendant has height 1
/// and `spine.len() == height`. `spine[0]` is `first_vertex` and the spine
/// follows a deepest descent, breaking ties toward smaller ids.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Branch {
    pub first_vertex: usize,
    pub height: usize,
    pub order: usize,
    pub spine: Vec<usize>,
}

/// A diametral path with the branch decomposition along it.
///
/// `branches[i]` lists the off-path subtrees at `vertices[i]`, sorted by
/// height descending then first vertex ascending. Endpoints of a diametral
/// path are leaves, so their lists are empty.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DiametralPath {
    pub vertices: Vec<usize>,
    pub d: usize,
    pub branches: Vec<Vec<Branch>>,
}

/// Farthest vertex from `src` (smallest id on ties), with its distance.
fn farthest(dist: &[Option<usize>]) -> (usize, usize) {
    let mut best = (0, 0);
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = d {
            if *d > best.1 {
                best = (v, *d);
            }
        }
    }
    best
}

/// Diametral path oriented away from vertex 0. See [`diametral_path_rooted`].
pub fn diametral_path(t: &Tree) -> DiametralPath {
    diametral_path_rooted(t, 0).expect("vertex 0 always exists")
}

/// Diametral path found by double BFS, oriented so `vertices[0]` is the
/// endpoint farther from `root` (smaller id on ties). Deterministic: BFS
/// starts at vertex 0 and every tie prefers the smaller id.
pub fn diametral_path_rooted(t: &Tree, root: usize) -> Result<DiametralPath> {
    t.check_vertex(root)?;
    let alive = vec![true; t.n()];
    Ok(diametral_path_masked(t, root, &alive))
}

/// Diametral path of the `alive`-induced subtree, which must be connected and
/// contain `root`. Orientation and tie-breaking as in [`diametral_path_rooted`].
pub(crate) fn diametral_path_masked(t: &Tree, root: usize, alive: &[bool]) -> DiametralPath {
    let start = (0..t.n()).find(|&v| alive[v]).expect("mask is nonempty");
    let d0 = bfs_dist_masked(t, start, alive);
    let (a, _) = farthest(&d0);
    let da = bfs_dist_masked(t, a, alive);
    let (bvert, d) = farthest(&da);
    let droot = bfs_dist_masked(t, root, alive);
    let (da_root, db_root) = (droot[a].unwrap(), droot[bvert].unwrap());
    let (from, to) = if da_root > db_root || (da_root == db_root && a < bvert) {
        (a, bvert)
    } else {
        (bvert, a)
    };
    // Walk from `from` to `to`, always stepping closer to `to`.
    let dto = bfs_dist_masked(t, to, alive);
    let mut vertices = vec![from];
    let mut cur = from;
    while cur != to {
        let next = t
            .adj(cur)
            .iter()
            .copied()
            .find(|&w| alive[w] && dto[w] == Some(dto[cur].unwrap() - 1))
            .expect("path to endpoint exists");
        vertices.push(next);
        cur = next;
    }
    debug_assert_eq!(vertices.len(), d + 1);
    let branches = path_branches(t, &vertices, alive);
    DiametralPath {
        vertices,
        d,
        branches,
    }
}

/// Branch decomposition along an alive path.
pub(crate) fn path_branches(t: &Tree, path: &[usize], alive: &[bool]) -> Vec<Vec<Branch>> {
    let mut on_path = vec![false; t.n()];
    for &u in path {
        on_path[u] = true;
    }
    let mut out = Vec::with_capacity(path.len());
    for &u in path {
        let mut list: Vec<Branch> = t
            .adj(u)
            .iter()
            .copied()
            .filter(|&w| alive[w] && !on_path[w])
            .map(|w| branch_at(t, u, w, alive))
            .collect();
        list.sort_by(|x, y| y.height.cmp(&x.height).then(x.first_vertex.cmp(&y.first_vertex)));
        out.push(list);
    }
    out
}

/// The branch hanging at `anchor` through its neighbor `first`, within `alive`.
fn branch_at(t: &Tree, anchor: usize, first: usize, alive: &[bool]) -> Branch {
    // Depth-first collect; depth is distance from the anchor.
    let mut vertices = Vec::new();
    let mut depth_of = std::collections::HashMap::new();
    let mut stack = vec![(first, anchor, 1usize)];
    while let Some((v, parent, depth)) = stack.pop() {
        vertices.push(v);
        depth_of.insert(v, depth);
        for &w in t.adj(v) {
            if w != parent && alive[w] {
                stack.push((w, v, depth + 1));
            }
        }
    }
    vertices.sort_unstable();
    let height = depth_of.values().copied().max().unwrap_or(1);
    // Deepest descent from `first`, smaller id on ties.
    let mut spine = vec![first];
    let mut cur = first;
    let mut prev = anchor;
    loop {
        let mut next: Option<(usize, usize)> = None; // (depth below, vertex)
        for &w in t.adj(cur) {
            if w == prev || !alive[w] {
                continue;
            }
            let below = subtree_height(t, cur, w, alive);
            let better = match next {
                None => true,
                Some((bd, bw)) => below > bd || (below == bd && w < bw),
            };
            if better {
                next = Some((below, w));
            }
        }
        match next {
            Some((_, w)) => {
                spine.push(w);
                prev = cur;
                cur = w;
            }
            None => break,
        }
    }
    debug_assert_eq!(spine.len(), height);
    Branch {
        first_vertex: first,
        height,
        order: vertices.len(),
        spine,
    }
}

/// Height of the subtree entered from `parent` into `child`: the maximum
/// number of vertices on a downward path starting at `child`.
fn subtree_height(t: &Tree, parent: usize, child: usize, alive: &[bool]) -> usize {
    let mut best = 1;
    let mut stack = vec![(child, parent, 1usize)];
    while let Some((v, p, depth)) = stack.pop() {
        best = best.max(depth);
        for &w in t.adj(v) {
            if w != p && alive[w] {
                stack.push((w, v, depth + 1));
            }
        }
    }
    best
}

/// A tree with a distinguished root and the derived parent/child structure.
#[derive(Debug, Clone)]
pub struct RootedView {
    tree: Tree,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    height: usize,
}

impl RootedView {
    pub fn new(tree: Tree, root: usize) -> Result<Self> {
        tree.check_vertex(root)?;
        let n = tree.n();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::new();
        let mut seen = vec![false; n];
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in tree.adj(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        // Adjacency is sorted, so children inherit ascending order.
        let height = depth.iter().copied().max().unwrap_or(0);
        Ok(RootedView {
            tree,
            root,
            parent,
            depth,
            children,
            height,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn into_tree(self) -> Tree {
        self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Height of the subtree rooted at `v` (0 for a leaf).
    pub fn subtree_height(&self, v: usize) -> usize {
        let mut best = 0;
        let mut stack = vec![(v, 0usize)];
        while let Some((u, d)) = stack.pop() {
            best = best.max(d);
            for &c in self.children(u) {
                stack.push((c, d + 1));
            }
        }
        best
    }

    /// Vertices of the subtree rooted at `v`, sorted ascending.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend_from_slice(self.children(u));
        }
        out.sort_unstable();
        out
    }
}

/// Structural summary of a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Classification {
    pub height: usize,
    /// Number of vertices with unrooted degree exactly 2.
    pub n2: usize,
    pub is_binary: bool,
    pub is_full: bool,
    pub is_perfect: bool,
    pub is_complete: bool,
    /// Full but not perfect.
    pub is_fbtnp: bool,
    pub max_children: usize,
    /// `None` when the tree has no internal vertex (a single vertex).
    pub min_internal_children: Option<usize>,
}

impl Classification {
    /// Every internal vertex has between 2 and `k` children (vacuous for a
    /// single vertex).
    pub fn is_3k_ary(&self, k: usize) -> bool {
        self.min_internal_children.is_none_or(|m| m >= 2) && self.max_children <= k
    }
}

/// Classifies the tree rooted at `root`.
///
/// `is_complete` is a shape property: binary, every level above the last is
/// full, and at most one parent on the second-to-last level has a single
/// child (so the last level can be packed to the left).
pub fn classify(t: &Tree, root: usize) -> Result<Classification> {
    let rv = RootedView::new(t.clone(), root)?;
    classify_view(&rv)
}

pub(crate) fn classify_view(rv: &RootedView) -> Result<Classification> {
    let t = rv.tree();
    let n = t.n();
    let height = rv.height();
    let n2 = (0..n).filter(|&v| t.degree(v) == 2).count();
    let mut max_children = 0;
    let mut min_internal: Option<usize> = None;
    for v in 0..n {
        let c = rv.children(v).len();
        max_children = max_children.max(c);
        if c > 0 {
            min_internal = Some(min_internal.map_or(c, |m| m.min(c)));
        }
    }
    let is_binary = max_children <= 2;
    let is_full = (0..n).all(|v| matches!(rv.children(v).len(), 0 | 2));
    let mut level_count = vec![0usize; height + 1];
    for v in 0..n {
        level_count[rv.depth(v)] += 1;
    }
    let is_perfect = is_full && (0..n).all(|v| rv.children(v).is_empty() == (rv.depth(v) == height));
    let is_complete = if !is_binary {
        false
    } else if height == 0 {
        true
    } else {
        let full_above = (0..height).all(|d| level_count[d] == 1usize << d);
        let singles_at_fringe = (0..n)
            .filter(|&v| rv.depth(v) == height - 1 && rv.children(v).len() == 1)
            .count();
        full_above && singles_at_fringe <= 1
    };
    Ok(Classification {
        height,
        n2,
        is_binary,
        is_full,
        is_perfect,
        is_complete,
        is_fbtnp: is_full && !is_perfect,
        max_children,
        min_internal_children: min_internal,
    })
}

/// BFS spanning tree from vertex 0 of an arbitrary undirected graph given as
/// an edge list. Self-loops are ignored and parallel edges collapsed; the
/// graph must be connected.
pub fn spanning_tree(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
    if n == 0 {
        return Err(Error::BadParam("vertex count must be at least 1".into()));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n {
            return Err(Error::BadVertexId { v: u, n });
        }
        if v >= n {
            return Err(Error::BadVertexId { v, n });
        }
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut seen = vec![false; n];
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                tree_edges.push((u, w));
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::NotConnected);
    }
    build_tree(n, &tree_edges)
}
