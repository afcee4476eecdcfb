//! Iterative peeling engine behind the square-root burning bounds.
//!
//! The engine maintains a shrinking alive subtree `R` of the input tree and a
//! window of burn steps `1..=K`. Early steps carry large burn radii and are
//! spent clearing the prefix of a diametral path of `R`; the engine
//! occasionally also spends the two smallest-radius steps at the back of the
//! window deep inside a tail branch. Every removal from `R` is justified by
//! ball coverage alone: a vertex leaves `R` only when some placed source
//! reaches it within that source's radius. When `R` is empty the placed balls
//! cover the whole tree, so [`crate::burn::assemble`] can turn the plan into
//! a strictly valid sequence, repairing any step collisions without losing
//! coverage.

use serde::Serialize;

use crate::tree::{
    bfs_dist, bfs_dist_masked, diametral_path_masked, path_branches, DiametralPath, Tree,
};
use crate::{Error, Result};

/// Which placement schedule the engine runs.
///
/// `Sqrt` is the basic schedule (budget `ceil(sqrt(n))`); `Improved` claims
/// larger per-iteration quotas to fit the tighter `ceil(sqrt(n + 9)) - 1`
/// budget and falls back to the basic schedule whenever it spends back-window
/// steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineMode {
    Sqrt,
    Improved,
}

/// Diagnostic record of one peeling iteration.
///
/// `sources` lists the `(step, vertex)` placements the iteration emitted.
/// When the iteration runs a counted case, `quota_claimed` holds the number
/// of vertices the case analysis promises its sources burn, and
/// `covered_fresh` the number of alive vertices actually inside the placed
/// balls; tests assert `covered_fresh >= quota_claimed`. `residue_repair` is
/// set when connectivity forced the engine to keep part of its nominal
/// removal target alive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationAudit {
    pub mode: EngineMode,
    pub case_tag: &'static str,
    pub k_case: usize,
    pub sources: Vec<(usize, usize)>,
    pub quota_claimed: Option<usize>,
    pub covered_fresh: usize,
    pub residue_repair: bool,
    pub rerouted: bool,
}

/// Placements as `(step, vertex)` pairs plus one audit entry per iteration.
pub(crate) type PlannedSchedule = (Vec<(usize, usize)>, Vec<IterationAudit>);

/// Plan source placements so that the union of balls `N_{k - step}[v]`
/// covers the tree, using at most the steps `1..=k_total`.
///
/// Returns the placements plus one audit entry per iteration. The plan is
/// turned into a sequence by `assemble` with repair enabled.
pub(crate) fn plan_burning(
    t: &Tree,
    root: usize,
    k_total: usize,
    mode: EngineMode,
) -> Result<PlannedSchedule> {
    t.check_vertex(root)?;
    if k_total == 0 {
        return Err(Error::BadParam("step budget must be at least 1".into()));
    }
    let n = t.n();
    let mut eng = Engine {
        t,
        k_total,
        mode,
        alive: vec![true; n],
        alive_count: n,
        root,
        f: 1,
        b: k_total,
        planned: Vec::new(),
        audits: Vec::new(),
    };
    let mut iters = 0usize;
    while eng.alive_count > 0 {
        iters += 1;
        if iters > 4 * n + 16 {
            return Err(Error::Internal("peeling made no progress".into()));
        }
        eng.iterate()?;
    }
    Ok((eng.planned, eng.audits))
}

struct Engine<'a> {
    t: &'a Tree,
    k_total: usize,
    mode: EngineMode,
    alive: Vec<bool>,
    alive_count: usize,
    root: usize,
    /// Next unused step at the front of the window (large radius).
    f: usize,
    /// Last unused step at the back of the window (small radius).
    b: usize,
    planned: Vec<(usize, usize)>,
    audits: Vec<IterationAudit>,
}

/// One iteration's outcome, handed to `Engine::apply`.
struct Move {
    mode: EngineMode,
    tag: &'static str,
    sources: Vec<(usize, usize)>,
    /// Alive vertices this iteration intends to remove.
    nominal: Vec<usize>,
    /// Path vertex deliberately kept alive to anchor the next iteration.
    stub: Option<usize>,
    quota: Option<usize>,
    rerouted: bool,
    root_override: Option<usize>,
    /// Switch to the basic schedule after this iteration.
    delegate: bool,
}

impl Move {
    fn new(tag: &'static str, mode: EngineMode, sources: Vec<(usize, usize)>) -> Self {
        Move {
            mode,
            tag,
            sources,
            nominal: Vec::new(),
            stub: None,
            quota: None,
            rerouted: false,
            root_override: None,
            delegate: false,
        }
    }
}

impl Engine<'_> {
    fn iterate(&mut self) -> Result<()> {
        if self.f > self.b {
            return Err(Error::Internal("placement window exhausted".into()));
        }
        // Virtual budget: how the analysis counts steps still ahead of us.
        let k = self.k_total - self.f + 1;

        if self.alive_count == 1 {
            let v = self.smallest_alive();
            let mut mv = Move::new("terminal-single", self.mode, vec![(self.b, v)]);
            mv.nominal = vec![v];
            return self.apply(k, mv);
        }

        let pv = diametral_path_masked(self.t, self.root, &self.alive);
        if pv.d <= 2 {
            return self.terminal_pair(&pv, k);
        }

        // One-shot finishers: a single front source that sees all of R.
        // First from the root's side of the path, then from the path center.
        let droot = bfs_dist_masked(self.t, self.root, &self.alive);
        let anchor = *pv
            .vertices
            .iter()
            .min_by_key(|&&u| droot[u].expect("path vertex alive"))
            .expect("path nonempty");
        if self.masked_ecc(anchor) < k {
            let mut mv = Move::new("regime-root", self.mode, vec![(self.f, anchor)]);
            mv.nominal = self.all_alive();
            self.f += 1;
            return self.apply(k, mv);
        }
        let half = pv.d.div_ceil(2);
        if half < k {
            let center = pv.vertices[half];
            let mut mv = Move::new("regime-center", self.mode, vec![(self.f, center)]);
            mv.nominal = self.all_alive();
            self.f += 1;
            return self.apply(k, mv);
        }

        // Small endgames: try to solve the remaining window outright.
        if self.alive_count <= 36 && self.b - self.f < 6 {
            if let Some(sources) = self.solve_window() {
                let mut mv = Move::new("exact-window", self.mode, sources);
                mv.nominal = self.all_alive();
                return self.apply(k, mv);
            }
        }

        if k < 3 {
            return self.greedy_prefix(&pv, k);
        }
        // The center check failed, so ceil(d / 2) >= k.
        debug_assert!(pv.d >= 2 * k - 1);
        match self.mode {
            EngineMode::Sqrt => self.step_sqrt(&pv, k),
            EngineMode::Improved if k < 4 => self.step_sqrt(&pv, k),
            EngineMode::Improved => self.step_improved(&pv, k, true, false),
        }
    }

    /// Basic schedule, one iteration. Needs `k >= 3` and `d >= 2k - 1`.
    fn step_sqrt(&mut self, pv: &DiametralPath, k: usize) -> Result<()> {
        let u = &pv.vertices;
        if self.prefix_order(pv, k - 2) >= 2 * k - 1 {
            // The prefix alone meets the quota; clear it with one source.
            let mut mv = Move::new("sqrt-heavy-prefix", EngineMode::Sqrt, vec![(self.f, u[k - 1])]);
            mv.nominal = self.prefix_set(pv, k - 1, Some(u[k - 1]));
            mv.stub = Some(u[k - 1]);
            mv.quota = Some(2 * k);
            self.f += 1;
            return self.apply(k, mv);
        }
        let tail_height = pv.branches[k].first().map_or(0, |br| br.height);
        if tail_height <= k - 2 {
            // Shallow tail branch: the ball at u_{k-1} still reaches it.
            let mut mv = Move::new("sqrt-shallow-tail", EngineMode::Sqrt, vec![(self.f, u[k - 1])]);
            mv.nominal = self.prefix_set(pv, k, Some(u[k]));
            mv.stub = Some(u[k]);
            mv.quota = Some(2 * k);
            self.f += 1;
            return self.apply(k, mv);
        }
        // Deep tail branch (height k-1 or k): pay two front steps, one of
        // them at the branch's deepest spine vertex.
        if self.b < self.f + 2 {
            return self.fallback_prefix(pv, k, false);
        }
        let tip = *pv.branches[k][0].spine.last().expect("spine nonempty");
        let mut mv = Move::new(
            "sqrt-deep-tail",
            EngineMode::Sqrt,
            vec![(self.f, tip), (self.f + 1, u[k - 2])],
        );
        mv.nominal = self.prefix_set(pv, k, Some(u[k]));
        mv.stub = Some(u[k]);
        mv.quota = Some(4 * k - 4);
        self.f += 2;
        self.apply(k, mv)
    }

    /// Refined schedule, one iteration. Needs `k >= 4` and `d >= 2k - 1`.
    fn step_improved(
        &mut self,
        pv: &DiametralPath,
        k: usize,
        allow_reroute: bool,
        rerouted: bool,
    ) -> Result<()> {
        if self.prefix_order(pv, k - 1) > 2 * k {
            self.improved_heavy(pv, k, rerouted)
        } else {
            self.improved_thin(pv, k, allow_reroute, rerouted)
        }
    }

    /// Heavy prefix: `|T(u_{k-1})| >= 2k + 1`.
    fn improved_heavy(&mut self, pv: &DiametralPath, k: usize, rerouted: bool) -> Result<()> {
        let u = &pv.vertices;
        if pv.branches[k - 1].first().map_or(0, |br| br.height) >= 2 {
            let mut mv = Move::new("imp-broad-prefix", EngineMode::Improved, vec![(self.f, u[k - 1])]);
            mv.nominal = self.prefix_set(pv, k - 1, Some(u[k - 1]));
            mv.stub = Some(u[k - 1]);
            mv.quota = Some(2 * k + 2);
            mv.rerouted = rerouted;
            self.f += 1;
            return self.apply(k, mv);
        }
        // Every branch at u_{k-1} is a pendant; dispatch on the tail branch.
        let tail_height = pv.branches[k].first().map_or(0, |br| br.height);
        if tail_height <= k - 2 {
            let mut mv = Move::new("imp-pendant-shallow", EngineMode::Improved, vec![(self.f, u[k - 1])]);
            mv.nominal = self.prefix_set(pv, k, Some(u[k]));
            mv.stub = Some(u[k]);
            mv.quota = Some(2 * k + 2);
            mv.rerouted = rerouted;
            self.f += 1;
            return self.apply(k, mv);
        }
        let branch = &pv.branches[k][0];
        if tail_height == k {
            if self.b < self.f + 2 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let mut mv = Move::new(
                "imp-pendant-deep",
                EngineMode::Improved,
                vec![(self.f, branch.spine[0]), (self.f + 1, u[k - 2])],
            );
            mv.nominal = self.prefix_set(pv, k, Some(u[k]));
            mv.stub = Some(u[k]);
            mv.quota = Some(4 * k);
            mv.rerouted = rerouted;
            self.f += 2;
            return self.apply(k, mv);
        }
        // tail_height == k - 1.
        if self.deep_sub_branch(u[k], &branch.spine, 1) {
            // The branch thickens right below its root; the same two-source
            // move as the height-k case meets the larger quota.
            if self.b < self.f + 2 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let mut mv = Move::new(
                "imp-pendant-branchy",
                EngineMode::Improved,
                vec![(self.f, branch.spine[0]), (self.f + 1, u[k - 2])],
            );
            mv.nominal = self.prefix_set(pv, k, Some(u[k]));
            mv.stub = Some(u[k]);
            mv.quota = Some(4 * k);
            mv.rerouted = rerouted;
            self.f += 2;
            return self.apply(k, mv);
        }
        // Thin height-(k-1) branch: split front and back, then hand the
        // shrunken window to the basic schedule.
        if self.b < self.f + 3 {
            return self.fallback_prefix(pv, k, rerouted);
        }
        let mut mv = Move::new(
            "imp-pendant-split",
            EngineMode::Improved,
            vec![(self.f, u[k - 1]), (self.b - 1, branch.spine[k - 3])],
        );
        mv.nominal = self.prefix_set(pv, k, Some(u[k]));
        mv.stub = Some(u[k]);
        mv.quota = Some(4 * k - 2);
        mv.rerouted = rerouted;
        mv.delegate = true;
        self.f += 1;
        self.b -= 2;
        self.apply(k, mv)
    }

    /// Thin prefix: `|T(u_{k-1})| = 2k - 1`, i.e. exactly one pendant per
    /// interior prefix vertex.
    fn improved_thin(
        &mut self,
        pv: &DiametralPath,
        k: usize,
        allow_reroute: bool,
        rerouted: bool,
    ) -> Result<()> {
        let u = &pv.vertices;
        let tail = pv.branches[k].first();
        let tail_height = tail.map_or(0, |br| br.height);
        if tail_height >= 2 {
            if tail_height <= k - 2 {
                let mut mv = Move::new("imp-thin-shallow", EngineMode::Improved, vec![(self.f, u[k - 1])]);
                mv.nominal = self.prefix_set(pv, k, Some(u[k]));
                mv.stub = Some(u[k]);
                mv.quota = Some(2 * k + 2);
                mv.rerouted = rerouted;
                self.f += 1;
                return self.apply(k, mv);
            }
            let branch = tail.expect("height >= 2 branch");
            if tail_height == k {
                if self.deep_sub_branch(u[k], &branch.spine, k - 2) {
                    // Mass sits off the branch spine; walk the diametral path
                    // through the branch instead and redo the case split.
                    if allow_reroute {
                        let mut verts: Vec<usize> = branch.spine.iter().rev().copied().collect();
                        verts.extend_from_slice(&u[k..]);
                        return self.redispatch(verts, pv.d, k);
                    }
                    return self.fallback_prefix(pv, k, true);
                }
                if self.b < self.f + 3 {
                    return self.fallback_prefix(pv, k, rerouted);
                }
                let pend = self.off_spine_children(u[k], &branch.spine, k - 3).into_iter().next();
                let Some(pend) = pend else {
                    return self.fallback_prefix(pv, k, rerouted);
                };
                let mut mv = Move::new(
                    "imp-thin-deep-split",
                    EngineMode::Improved,
                    vec![
                        (self.f, u[k - 1]),
                        (self.b - 1, branch.spine[k - 2]),
                        (self.b, pend),
                    ],
                );
                mv.nominal = self.prefix_set(pv, k, Some(u[k]));
                mv.stub = Some(u[k]);
                mv.quota = Some(4 * k - 2);
                mv.rerouted = rerouted;
                mv.delegate = true;
                self.f += 1;
                self.b -= 2;
                return self.apply(k, mv);
            }
            // tail_height == k - 1: spine split from u_k and u_1.
            if self.b < self.f + 3 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let mut mv = Move::new(
                "imp-thin-spine",
                EngineMode::Improved,
                vec![(self.f, u[k]), (self.b - 1, u[1])],
            );
            mv.nominal = self.prefix_set(pv, k, Some(u[k]));
            mv.stub = Some(u[k]);
            mv.quota = Some(4 * k - 4);
            mv.rerouted = rerouted;
            mv.delegate = true;
            self.f += 1;
            self.b -= 2;
            return self.apply(k, mv);
        }
        // Branches at u_k are pendants at most; look one step further.
        let Some(tail1) = pv.branches[k + 1].first() else {
            // u_{k+1} carries nothing, so it is the current root's side;
            // clear through it and restart from u_{k+2}.
            let mut mv = Move::new("imp-tail-root", EngineMode::Improved, vec![(self.f, u[k - 1])]);
            mv.nominal = self.prefix_set(pv, k + 1, None);
            mv.quota = Some(2 * k + 2);
            mv.rerouted = rerouted;
            mv.root_override = Some(u[k + 2]);
            self.f += 1;
            return self.apply(k, mv);
        };
        let h1 = tail1.height;
        if h1 + 3 <= k {
            let mut mv = Move::new("imp-tail-shallow", EngineMode::Improved, vec![(self.f, u[k - 1])]);
            mv.nominal = self.prefix_set(pv, k + 1, Some(u[k + 1]));
            mv.stub = Some(u[k + 1]);
            mv.quota = Some(2 * k + 2);
            mv.rerouted = rerouted;
            self.f += 1;
            return self.apply(k, mv);
        }
        if h1 == k - 2 {
            if self.b < self.f + 3 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let mut mv = Move::new(
                "imp-tail-mid",
                EngineMode::Improved,
                vec![(self.f, u[k]), (self.b - 1, u[1])],
            );
            mv.nominal = self.prefix_set(pv, k + 1, Some(u[k + 1]));
            mv.stub = Some(u[k + 1]);
            mv.quota = Some(4 * k - 4);
            mv.rerouted = rerouted;
            mv.delegate = true;
            self.f += 1;
            self.b -= 2;
            return self.apply(k, mv);
        }
        if h1 == k - 1 {
            if self.b < self.f + 3 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let Some(pend) = pv.branches[2].first().map(|br| br.first_vertex) else {
                return self.fallback_prefix(pv, k, rerouted);
            };
            let mut mv = Move::new(
                "imp-tail-spine",
                EngineMode::Improved,
                vec![(self.f, u[k + 1]), (self.b - 1, u[1]), (self.b, pend)],
            );
            mv.nominal = self.prefix_set(pv, k + 1, Some(u[k + 1]));
            mv.stub = Some(u[k + 1]);
            mv.quota = Some(4 * k - 2);
            mv.rerouted = rerouted;
            mv.delegate = true;
            self.f += 1;
            self.b -= 2;
            return self.apply(k, mv);
        }
        if h1 == k {
            if self.b < self.f + 2 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let mut mv = Move::new(
                "imp-tail-deep",
                EngineMode::Improved,
                vec![(self.f, tail1.spine[0]), (self.f + 1, u[k - 2])],
            );
            mv.nominal = self.prefix_set(pv, k + 1, Some(u[k + 1]));
            mv.stub = Some(u[k + 1]);
            mv.quota = Some(4 * k);
            mv.rerouted = rerouted;
            self.f += 2;
            return self.apply(k, mv);
        }
        // h1 == k + 1, the diametral ceiling.
        debug_assert_eq!(h1, k + 1);
        let total = self.prefix_order(pv, k) + tail1.order;
        if total == 4 * k + 2 {
            if self.b < self.f + 2 {
                return self.fallback_prefix(pv, k, rerouted);
            }
            let mut mv = Move::new(
                "imp-tail-balanced",
                EngineMode::Improved,
                vec![(self.f, tail1.spine[1]), (self.f + 1, u[k - 2])],
            );
            mv.nominal = self.prefix_set(pv, k + 1, Some(u[k + 1]));
            mv.stub = Some(u[k + 1]);
            mv.quota = Some(4 * k);
            mv.rerouted = rerouted;
            self.f += 2;
            return self.apply(k, mv);
        }
        // The tall branch outweighs the path prefix; make it the path.
        if allow_reroute {
            let mut verts: Vec<usize> = tail1.spine.iter().rev().copied().collect();
            verts.extend_from_slice(&u[k + 1..]);
            return self.redispatch(verts, pv.d, k);
        }
        self.fallback_prefix(pv, k, true)
    }

    /// Rebuild the path view on an explicit vertex list and redo the refined
    /// case split once.
    fn redispatch(&mut self, verts: Vec<usize>, d: usize, k: usize) -> Result<()> {
        debug_assert_eq!(verts.len(), d + 1, "reroute keeps the path length");
        #[cfg(debug_assertions)]
        {
            let dist = bfs_dist_masked(self.t, verts[0], &self.alive);
            debug_assert_eq!(dist[*verts.last().unwrap()], Some(d), "reroute stays diametral");
        }
        let branches = path_branches(self.t, &verts, &self.alive);
        let pv = DiametralPath { vertices: verts, d, branches };
        self.step_improved(&pv, k, false, true)
    }

    /// Last two alive path vertices apart: finish with the back steps, as a
    /// star of diameter <= 2 fits inside any radius-1 ball at its center.
    fn terminal_pair(&mut self, pv: &DiametralPath, k: usize) -> Result<()> {
        let center = pv.vertices[pv.d / 2];
        let sources = if self.f < self.b {
            let other = (0..self.t.n())
                .find(|&v| self.alive[v] && v != center)
                .expect("at least two alive");
            vec![(self.b - 1, center), (self.b, other)]
        } else {
            if self.k_total == self.b {
                return Err(Error::Internal("no radius left for the final pair".into()));
            }
            vec![(self.b, center)]
        };
        let mut mv = Move::new("terminal-pair", self.mode, sources);
        mv.nominal = self.all_alive();
        self.apply(k, mv)
    }

    /// Budget too small for the case analysis: burn from the far end of the
    /// covered prefix so the path endpoint always falls off.
    fn greedy_prefix(&mut self, pv: &DiametralPath, k: usize) -> Result<()> {
        let v = pv.vertices[(k - 1).min(pv.d)];
        let radius = self.k_total - self.f;
        let dist = bfs_dist(self.t, v);
        let nominal: Vec<usize> = (0..self.t.n())
            .filter(|&w| self.alive[w] && dist[w].expect("connected") <= radius)
            .collect();
        let mut mv = Move::new("greedy-prefix", self.mode, vec![(self.f, v)]);
        mv.nominal = nominal;
        self.f += 1;
        self.apply(k, mv)
    }

    /// Always-applicable single placement used when a counted case cannot
    /// spend the steps it wants; claims no quota.
    fn fallback_prefix(&mut self, pv: &DiametralPath, k: usize, rerouted: bool) -> Result<()> {
        let v = pv.vertices[k - 1];
        let mut mv = Move::new("fallback-prefix", self.mode, vec![(self.f, v)]);
        mv.nominal = self.prefix_set(pv, k - 1, Some(v));
        mv.stub = Some(v);
        mv.rerouted = rerouted;
        self.f += 1;
        self.apply(k, mv)
    }

    /// Complete search over the remaining window: place centers on steps
    /// `f..` so the balls cover every alive vertex with pairwise spacing.
    /// Best effort; a miss just falls back to the case analysis.
    fn solve_window(&self) -> Option<Vec<(usize, usize)>> {
        let alive = self.all_alive();
        let rows: Vec<Vec<usize>> = alive
            .iter()
            .map(|&v| {
                bfs_dist(self.t, v)
                    .into_iter()
                    .map(|d| d.expect("connected"))
                    .collect()
            })
            .collect();
        let mut placed: Vec<(usize, usize)> = Vec::new();
        let mut covered = vec![false; alive.len()];
        let mut budget = 200_000usize;
        if self.window_dfs(&alive, &rows, &mut placed, &mut covered, &mut budget) {
            Some(placed)
        } else {
            None
        }
    }

    fn window_dfs(
        &self,
        alive: &[usize],
        rows: &[Vec<usize>],
        placed: &mut Vec<(usize, usize)>,
        covered: &mut [bool],
        budget: &mut usize,
    ) -> bool {
        let Some(target) = covered.iter().position(|&c| !c) else {
            return true;
        };
        let pos = self.f + placed.len();
        if pos > self.b || *budget == 0 {
            return false;
        }
        *budget -= 1;
        let radius = self.k_total - pos;
        for (ci, &c) in alive.iter().enumerate() {
            if rows[ci][alive[target]] > radius {
                continue;
            }
            if placed.iter().any(|&(q, x)| rows[ci][x] < pos - q) {
                continue;
            }
            let newly: Vec<usize> = (0..alive.len())
                .filter(|&w| !covered[w] && rows[ci][alive[w]] <= radius)
                .collect();
            for &w in &newly {
                covered[w] = true;
            }
            placed.push((pos, c));
            if self.window_dfs(alive, rows, placed, covered, budget) {
                return true;
            }
            placed.pop();
            for &w in &newly {
                covered[w] = false;
            }
        }
        false
    }

    /// Place the sources, drop the covered part of the nominal set, and keep
    /// whatever else is needed to hold the remainder of R together.
    fn apply(&mut self, k_case: usize, mv: Move) -> Result<()> {
        let n = self.t.n();
        let mut covered = vec![false; n];
        for &(pos, v) in &mv.sources {
            debug_assert!((1..=self.k_total).contains(&pos));
            debug_assert!(self.alive[v], "sources are placed on alive vertices");
            let radius = self.k_total - pos;
            let dist = bfs_dist(self.t, v);
            for w in 0..n {
                if self.alive[w] && dist[w].expect("connected") <= radius {
                    covered[w] = true;
                }
            }
        }
        let covered_fresh = covered.iter().filter(|&&c| c).count();

        let mut kept = self.alive.clone();
        let mut core = 0usize;
        for &v in &mv.nominal {
            debug_assert!(self.alive[v], "nominal targets are alive");
            debug_assert!(mv.stub != Some(v), "the stub is never a removal target");
            if covered[v] && kept[v] {
                kept[v] = false;
                core += 1;
            }
        }
        let removed = if core == self.alive_count {
            let r = self.alive_count;
            self.alive.iter_mut().for_each(|a| *a = false);
            self.alive_count = 0;
            r
        } else {
            // Keep exactly the union of paths from the smallest kept vertex
            // to every other kept vertex: the closure stays connected and
            // everything dropped lies inside this iteration's balls.
            let anchor = kept.iter().position(|&x| x).expect("kept vertex exists");
            let mut parent = vec![usize::MAX; n];
            let mut order = Vec::with_capacity(self.alive_count);
            let mut seen = vec![false; n];
            seen[anchor] = true;
            let mut stack = vec![anchor];
            while let Some(v) = stack.pop() {
                order.push(v);
                for &w in self.t.adj(v) {
                    if self.alive[w] && !seen[w] {
                        seen[w] = true;
                        parent[w] = v;
                        stack.push(w);
                    }
                }
            }
            debug_assert_eq!(order.len(), self.alive_count, "R stays connected");
            let mut keep = kept;
            for &v in order.iter().rev() {
                if keep[v] && parent[v] != usize::MAX {
                    keep[parent[v]] = true;
                }
            }
            let mut removed = 0usize;
            for (av, kv) in self.alive.iter_mut().zip(&keep) {
                if *av && !kv {
                    *av = false;
                    removed += 1;
                }
            }
            self.alive_count -= removed;
            removed
        };
        let residue_repair = removed != mv.nominal.len();

        if self.alive_count > 0 && !self.alive[self.root] {
            self.root = mv
                .root_override
                .filter(|&r| self.alive[r])
                .or(mv.stub.filter(|&s| self.alive[s]))
                .unwrap_or_else(|| self.smallest_alive());
        }
        self.planned.extend_from_slice(&mv.sources);
        self.audits.push(IterationAudit {
            mode: mv.mode,
            case_tag: mv.tag,
            k_case,
            sources: mv.sources,
            quota_claimed: mv.quota,
            covered_fresh,
            residue_repair,
            rerouted: mv.rerouted,
        });
        if mv.delegate {
            self.mode = EngineMode::Sqrt;
        }
        Ok(())
    }

    /// Order of the subtree hanging on the path prefix `u_0..=u_i`.
    fn prefix_order(&self, pv: &DiametralPath, i: usize) -> usize {
        (i + 1)
            + pv.branches[..=i]
                .iter()
                .flatten()
                .map(|br| br.order)
                .sum::<usize>()
    }

    /// Vertices of the prefix subtree `u_0..=u_i` plus their branches,
    /// optionally excluding one path vertex (the stub).
    fn prefix_set(&self, pv: &DiametralPath, i: usize, exclude: Option<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        for j in 0..=i {
            let uj = pv.vertices[j];
            if Some(uj) != exclude {
                out.push(uj);
            }
            for br in &pv.branches[j] {
                self.collect_branch(uj, br.first_vertex, &mut out);
            }
        }
        out
    }

    /// Alive vertices of the branch entered from `anchor` at `first`.
    fn collect_branch(&self, anchor: usize, first: usize, out: &mut Vec<usize>) {
        let mut stack = vec![(first, anchor)];
        while let Some((v, p)) = stack.pop() {
            out.push(v);
            for &w in self.t.adj(v) {
                if w != p && self.alive[w] {
                    stack.push((w, v));
                }
            }
        }
    }

    /// Does any of the first `max_idx` spine vertices carry an off-spine
    /// child with a child of its own (an off-spine subtree of height >= 2)?
    fn deep_sub_branch(&self, anchor: usize, spine: &[usize], max_idx: usize) -> bool {
        for i in 0..max_idx.min(spine.len()) {
            for c in self.off_spine_children(anchor, spine, i) {
                let p = spine[i];
                if self.t.adj(c).iter().any(|&w| self.alive[w] && w != p) {
                    return true;
                }
            }
        }
        false
    }

    /// Alive children of `spine[idx]` that are neither its spine neighbour
    /// nor its parent, in ascending id order.
    fn off_spine_children(&self, anchor: usize, spine: &[usize], idx: usize) -> Vec<usize> {
        let p = spine[idx];
        let parent = if idx == 0 { anchor } else { spine[idx - 1] };
        let next = spine.get(idx + 1).copied();
        self.t
            .adj(p)
            .iter()
            .copied()
            .filter(|&c| self.alive[c] && c != parent && Some(c) != next)
            .collect()
    }

    fn masked_ecc(&self, v: usize) -> usize {
        let dist = bfs_dist_masked(self.t, v, &self.alive);
        (0..self.t.n())
            .filter(|&w| self.alive[w])
            .map(|w| dist[w].expect("R connected"))
            .max()
            .expect("R nonempty")
    }

    fn smallest_alive(&self) -> usize {
        self.alive.iter().position(|&a| a).expect("R nonempty")
    }

    fn all_alive(&self) -> Vec<usize> {
        (0..self.t.n()).filter(|&v| self.alive[v]).collect()
    }
}
