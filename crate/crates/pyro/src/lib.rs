//! Graph burning on trees: exact solvers, constructive upper bounds, and
//! generators for the tree families the bounds are tuned for.
//!
//! Burning proceeds in rounds. At step `i` the fire spreads from every vertex
//! burned at step `i-1`, then a fresh source `x_i` ignites. A sequence
//! `(x_1, ..., x_k)` burns the whole graph iff the closed balls
//! `N_{k-i}[x_i]` cover every vertex; the minimum such `k` is the burning
//! number. See [`burn`] for validators, [`exact`] for the solver, and
//! [`bounds`] for the constructive algorithms.

pub mod bounds;
pub mod burn;
pub mod exact;
pub mod gen;
pub mod io;
mod peel;
pub mod tree;

pub use bounds::BoundResult;
pub use burn::{BurnTrace, BurnVerdict, BurningSequence};
pub use exact::{Budget, OracleResult};
pub use gen::GenSpec;
pub use peel::{EngineMode, IterationAudit};
pub use tree::{Branch, Classification, DiametralPath, RootedView, Tree};

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph contains a cycle")]
    HasCycle,
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex id {v} out of range for {n} vertices")]
    BadVertexId { v: usize, n: usize },
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("generator retries exhausted")]
    RetriesExhausted,
    #[error("tree is not perfect")]
    NotPerfect,
    #[error("tree is not a strictly incomplete complete binary tree")]
    NotComplete,
    #[error("tree is perfect")]
    IsPerfect,
    #[error("tree is not a full binary tree, or is perfect")]
    NotFbtnp,
    #[error("tree not eligible: {0}")]
    NotEligible(String),
    #[error("search budget exceeded after {nodes_explored} nodes (best upper bound {best_upper:?})")]
    BudgetExceeded {
        nodes_explored: u64,
        best_upper: Option<usize>,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Smallest `s` with `s * s >= x`.
pub(crate) fn ceil_sqrt(x: usize) -> usize {
    let s = x.isqrt();
    if s * s < x {
        s + 1
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::ceil_sqrt;

    #[test]
    fn ceil_sqrt_small_values() {
        let expect = [
            (0, 0),
            (1, 1),
            (2, 2),
            (3, 2),
            (4, 2),
            (5, 3),
            (9, 3),
            (10, 4),
            (16, 4),
            (17, 5),
            (24, 5),
            (25, 5),
            (26, 6),
        ];
        for (x, s) in expect {
            assert_eq!(ceil_sqrt(x), s, "ceil_sqrt({x})");
        }
    }

    #[test]
    fn ceil_sqrt_agrees_with_search() {
        for x in 0..10_000usize {
            let s = ceil_sqrt(x);
            assert!(s * s >= x);
            assert!(s == 0 || (s - 1) * (s - 1) < x);
        }
    }
}
