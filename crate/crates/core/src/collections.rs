//! Brute-force enumeration of edge-disjoint collections of upward paths, one
//! path per leaf, counted by the number of non-trivial paths.
//!
//! A path from leaf `v` is the number `j ∈ [0, level(v)]` of edges it climbs.

use rayon::prelude::*;
use thiserror::Error;

use crate::tree::{RootedTree, TreeError, Vertex};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollectionError {
    #[error("search space of {0} path choices exceeds the budget")]
    BudgetExceeded(u128),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `counts[k]` collections have exactly `k` non-trivial paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionCount {
    pub counts: Vec<u64>,
    pub total: u64,
}

/// Number of upward paths from a leaf, the trivial one included.
pub fn upward_paths(tree: &RootedTree, v: Vertex) -> Result<usize, TreeError> {
    tree.check_leaf(v)?;
    Ok(tree.level(v) + 1)
}

/// `Π (level(v) + 1)` over the leaves, saturating.
pub fn search_space(tree: &RootedTree) -> u128 {
    tree.leaves()
        .iter()
        .fold(1u128, |acc, &v| acc.saturating_mul(tree.level(v) as u128 + 1))
}

/// Per-leaf edge lists (bottom-up), for leaves in preorder so that nearby
/// leaves, which share edges, are decided consecutively.
struct Search {
    /// `(leaf position, edges above the leaf from the bottom)`
    leaves: Vec<(usize, Vec<Vertex>)>,
    vertices: usize,
}

impl Search {
    fn new(tree: &RootedTree) -> Self {
        let leaves = tree
            .preorder()
            .into_iter()
            .filter(|&v| tree.is_leaf(v))
            .map(|v| {
                let mut edges = Vec::with_capacity(tree.level(v));
                let mut x = v;
                while let Some(p) = tree.parent(x) {
                    edges.push(x);
                    x = p;
                }
                (tree.leaf_position(v).expect("leaf"), edges)
            })
            .collect();
        Search { leaves, vertices: tree.vertex_count() }
    }

    /// Calls `visit(choice, k)` for every edge-disjoint completion of the
    /// leaves from index `i` on.
    fn walk<F: FnMut(&[usize], usize)>(&self, i: usize, used: &mut [bool], choice: &mut [usize], k: usize, visit: &mut F) {
        let Some((pos, edges)) = self.leaves.get(i) else {
            visit(choice, k);
            return;
        };
        choice[*pos] = 0;
        self.walk(i + 1, used, choice, k, visit);
        let mut j = 0;
        while j < edges.len() && !used[edges[j]] {
            used[edges[j]] = true;
            j += 1;
            choice[*pos] = j;
            self.walk(i + 1, used, choice, k + 1, visit);
        }
        for &e in &edges[..j] {
            used[e] = false;
        }
        choice[*pos] = 0;
    }

    fn count_from(&self, first: Option<usize>) -> Vec<u64> {
        let n = self.leaves.len();
        let mut counts = vec![0u64; n + 1];
        let mut used = vec![false; self.vertices];
        let mut choice = vec![0usize; n];
        let mut tally = |_: &[usize], k: usize| counts[k] += 1;
        match first {
            None => self.walk(0, &mut used, &mut choice, 0, &mut tally),
            Some(j) => {
                // fixed choice for the first leaf; its own edges cannot clash
                let (pos, edges) = &self.leaves[0];
                for &e in &edges[..j] {
                    used[e] = true;
                }
                choice[*pos] = j;
                self.walk(1, &mut used, &mut choice, (j > 0) as usize, &mut tally);
            }
        }
        counts
    }
}

fn guard(tree: &RootedTree, budget: u64) -> Result<(), CollectionError> {
    let size = search_space(tree);
    if size > budget as u128 {
        return Err(CollectionError::BudgetExceeded(size));
    }
    Ok(())
}

/// Counts edge-disjoint collections by number of non-trivial paths.
///
/// The work is split over the first leaf's choices; partial counts are
/// summed, so the result does not depend on the split.
pub fn count_collections(tree: &RootedTree, budget: u64) -> Result<CollectionCount, CollectionError> {
    guard(tree, budget)?;
    let search = Search::new(tree);
    let n = search.leaves.len();
    let first_choices = search.leaves[0].1.len() + 1;
    let counts = (0..first_choices)
        .into_par_iter()
        .map(|j| search.count_from(Some(j)))
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = counts.iter().sum();
    Ok(CollectionCount { counts, total })
}

/// Sequential count without the split, used to check the parallel path.
pub fn count_collections_sequential(tree: &RootedTree, budget: u64) -> Result<CollectionCount, CollectionError> {
    guard(tree, budget)?;
    let counts = Search::new(tree).count_from(None);
    let total = counts.iter().sum();
    Ok(CollectionCount { counts, total })
}

/// All collections with exactly `k` non-trivial paths, each given as the
/// number of edges climbed per leaf (in leaf order), sorted.
pub fn collections_with(tree: &RootedTree, k: usize, budget: u64) -> Result<Vec<Vec<usize>>, CollectionError> {
    guard(tree, budget)?;
    let search = Search::new(tree);
    let n = search.leaves.len();
    let mut out = Vec::new();
    let mut used = vec![false; search.vertices];
    let mut choice = vec![0usize; n];
    search.walk(0, &mut used, &mut choice, 0, &mut |c: &[usize], nk| {
        if nk == k {
            out.push(c.to_vec());
        }
    });
    out.sort();
    Ok(out)
}

/// Checks that a choice vector describes an edge-disjoint collection.
pub fn is_edge_disjoint(tree: &RootedTree, choice: &[usize]) -> bool {
    let leaves = tree.leaves();
    if choice.len() != leaves.len() {
        return false;
    }
    let mut used = vec![false; tree.vertex_count()];
    for (&v, &j) in leaves.iter().zip(choice) {
        if j > tree.level(v) {
            return false;
        }
        let mut x = v;
        for _ in 0..j {
            if used[x] {
                return false;
            }
            used[x] = true;
            x = tree.parent(x).expect("below the root");
        }
    }
    true
}
