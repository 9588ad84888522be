//! Tree transforms that push branches away from the root: branch shift, star
//! shift and leaf swap.
//!
//! Vertex indices are stable across a transform, so leaves keep their identity
//! and the ancestral matrices before and after share one leaf order. The star
//! shift appends its new internal vertex with index `N`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::matrices::ancestral_matrix;
use crate::spectral::{spectral_radius, SpectralError};
use crate::tree::{RootedTree, TreeError, Vertex};

/// Perron entries above this count as positive when witnessing strictness.
pub const POSITIVITY_THRESHOLD: f64 = 1e-6;
/// Minimum gain asserted when strictness is witnessed.
pub const STRICT_GAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("path must have at least two vertices, each a child of the previous")]
    InvalidPath,
    #[error("branch rooted at {0} contains a path vertex")]
    BranchOnPath(Vertex),
    #[error("last path vertex {0} is a leaf")]
    VkIsLeaf(Vertex),
    #[error("vertex {0} has a child that is not a leaf")]
    NotAllChildrenLeaves(Vertex),
    #[error("vertex {0} has fewer than two children")]
    TooFewChildren(Vertex),
    #[error("vertex {child} is not a child of {parent}")]
    NotAChild { parent: Vertex, child: Vertex },
    #[error("w1 = {0} is a leaf")]
    W1IsLeaf(Vertex),
    #[error("w2 = {0} is not a leaf")]
    W2NotLeaf(Vertex),
    #[error("operation needs a {0}")]
    MissingField(&'static str),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    BranchShift,
    StarShift,
    LeafSwap,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::BranchShift => "branch-shift",
            OpKind::StarShift => "star-shift",
            OpKind::LeafSwap => "leaf-swap",
        })
    }
}

/// A transform and its vertices.
///
/// * branch shift: `path = v1..vk`, `branch_root` is the root of the moved branch.
/// * star shift: `path = [v1]`, `leaf = u`.
/// * leaf swap: `path = v1..vk`, `branch_root = w1`, `leaf = w2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSpec {
    pub kind: OpKind,
    pub path: Vec<Vertex>,
    pub branch_root: Option<Vertex>,
    pub leaf: Option<Vertex>,
}

impl OpSpec {
    pub fn branch_shift(path: Vec<Vertex>, branch_root: Vertex) -> Self {
        OpSpec { kind: OpKind::BranchShift, path, branch_root: Some(branch_root), leaf: None }
    }

    pub fn star_shift(v1: Vertex, u: Vertex) -> Self {
        OpSpec { kind: OpKind::StarShift, path: vec![v1], branch_root: None, leaf: Some(u) }
    }

    pub fn leaf_swap(path: Vec<Vertex>, w1: Vertex, w2: Vertex) -> Self {
        OpSpec { kind: OpKind::LeafSwap, path, branch_root: Some(w1), leaf: Some(w2) }
    }

    /// Leaves whose Perron entries the strictness hypothesis constrains.
    pub fn witness_leaves(&self, tree: &RootedTree) -> Vec<Vertex> {
        match self.kind {
            OpKind::StarShift => tree.children(self.path[0]).to_vec(),
            _ => tree.leaves_below(*self.path.last().expect("non-empty path")),
        }
    }
}

pub fn apply(tree: &RootedTree, spec: &OpSpec) -> Result<RootedTree, OpError> {
    match spec.kind {
        OpKind::BranchShift => branch_shift(tree, spec),
        OpKind::StarShift => {
            let v1 = *spec.path.first().ok_or(OpError::InvalidPath)?;
            star_shift(tree, v1, spec.leaf.ok_or(OpError::MissingField("leaf"))?)
        }
        OpKind::LeafSwap => leaf_swap(tree, spec),
    }
}

fn check_path(tree: &RootedTree, path: &[Vertex]) -> Result<(), OpError> {
    if path.len() < 2 {
        return Err(OpError::InvalidPath);
    }
    for &v in path {
        tree.check_vertex(v)?;
    }
    if path.windows(2).any(|w| tree.parent(w[1]) != Some(w[0])) {
        return Err(OpError::InvalidPath);
    }
    let vk = *path.last().expect("non-empty");
    if tree.is_leaf(vk) {
        return Err(OpError::VkIsLeaf(vk));
    }
    Ok(())
}

fn check_child(tree: &RootedTree, parent: Vertex, child: Vertex) -> Result<(), OpError> {
    tree.check_vertex(child)?;
    if tree.parent(child) != Some(parent) {
        return Err(OpError::NotAChild { parent, child });
    }
    Ok(())
}

fn rebuild(parents: &[Option<Vertex>]) -> RootedTree {
    RootedTree::from_parents(parents).expect("transform preserves tree structure")
}

/// Moves the branch rooted at `branch_root` from `v1` to `vk`.
pub fn branch_shift(tree: &RootedTree, spec: &OpSpec) -> Result<RootedTree, OpError> {
    let path = &spec.path;
    check_path(tree, path)?;
    let b = spec.branch_root.ok_or(OpError::MissingField("branch root"))?;
    check_child(tree, path[0], b)?;
    if b == path[1] {
        return Err(OpError::BranchOnPath(b));
    }
    let mut parents = tree.parents().to_vec();
    parents[b] = path.last().copied();
    Ok(rebuild(&parents))
}

/// Inserts a new child `v2` of `v1` (index `N`) and moves every child of
/// `v1` except `u` under it.
pub fn star_shift(tree: &RootedTree, v1: Vertex, u: Vertex) -> Result<RootedTree, OpError> {
    tree.check_vertex(v1)?;
    let kids = tree.children(v1);
    if kids.iter().any(|&c| !tree.is_leaf(c)) {
        return Err(OpError::NotAllChildrenLeaves(v1));
    }
    if kids.len() < 2 {
        return Err(OpError::TooFewChildren(v1));
    }
    check_child(tree, v1, u)?;
    let v2 = tree.vertex_count();
    let mut parents = tree.parents().to_vec();
    for &c in kids {
        if c != u {
            parents[c] = Some(v2);
        }
    }
    parents.push(Some(v1));
    Ok(rebuild(&parents))
}

/// Exchanges the subtree at `w1` (a child of `v1`) with the leaf `w2` (a
/// child of `vk`).
pub fn leaf_swap(tree: &RootedTree, spec: &OpSpec) -> Result<RootedTree, OpError> {
    let path = &spec.path;
    check_path(tree, path)?;
    let w1 = spec.branch_root.ok_or(OpError::MissingField("w1"))?;
    let w2 = spec.leaf.ok_or(OpError::MissingField("w2"))?;
    let (v1, vk) = (path[0], *path.last().expect("non-empty"));
    check_child(tree, v1, w1)?;
    check_child(tree, vk, w2)?;
    if tree.is_leaf(w1) {
        return Err(OpError::W1IsLeaf(w1));
    }
    if !tree.is_leaf(w2) {
        return Err(OpError::W2NotLeaf(w2));
    }
    if w1 == path[1] {
        return Err(OpError::BranchOnPath(w1));
    }
    let mut parents = tree.parents().to_vec();
    parents[w1] = Some(vk);
    parents[w2] = Some(v1);
    Ok(rebuild(&parents))
}

/// Every entry of `C(after)` is at least the matching entry of `C(before)`.
/// Both trees must have the same leaf set.
pub fn entrywise_dominates(before: &RootedTree, after: &RootedTree) -> bool {
    if before.leaves() != after.leaves() {
        return false;
    }
    let (a, b) = (ancestral_matrix(before), ancestral_matrix(after));
    (0..a.size()).all(|i| (0..a.size()).all(|j| b.get(i, j) >= a.get(i, j)))
}

/// Spectral radii around one transform, with the strictness witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Monotonicity {
    pub rho_before: f64,
    pub rho_after: f64,
    /// `None` for the leaf swap, which makes no entrywise claim.
    pub dominated: Option<bool>,
    /// The widest computed Perron vector is positive on the constrained leaves.
    pub hypothesis_witnessed: bool,
}

impl Monotonicity {
    pub fn non_decreasing(&self, tol: f64) -> bool {
        self.rho_after >= self.rho_before - tol
    }

    pub fn strict(&self) -> bool {
        self.rho_after > self.rho_before + STRICT_GAP
    }

    /// Holds unless the hypothesis is witnessed and the increase is not strict.
    pub fn consistent(&self, tol: f64) -> bool {
        self.non_decreasing(tol) && self.dominated != Some(false) && (!self.hypothesis_witnessed || self.strict())
    }
}

pub fn check_monotonicity(tree: &RootedTree, spec: &OpSpec, tol: f64) -> Result<(RootedTree, Monotonicity), MonotonicityError> {
    let after = apply(tree, spec)?;
    let before_sr = spectral_radius(tree, tol)?;
    let rho_after = spectral_radius(&after, tol)?.rho;
    let perron = before_sr.widest_perron();
    let hypothesis_witnessed = spec
        .witness_leaves(tree)
        .iter()
        .all(|&v| tree.leaf_position(v).is_some_and(|p| perron[p] > POSITIVITY_THRESHOLD));
    let dominated = match spec.kind {
        OpKind::LeafSwap => None,
        _ => Some(entrywise_dominates(tree, &after)),
    };
    let m = Monotonicity { rho_before: before_sr.rho, rho_after, dominated, hypothesis_witnessed };
    Ok((after, m))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonotonicityError {
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Downward paths `v1..vk` with `k ≥ 2` and `vk` internal.
fn downward_paths(tree: &RootedTree) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for v1 in tree.preorder() {
        let mut stack = vec![vec![v1]];
        while let Some(p) = stack.pop() {
            let last = *p.last().expect("non-empty");
            for &c in tree.children(last) {
                if !tree.is_leaf(c) {
                    let mut q = p.clone();
                    q.push(c);
                    out.push(q.clone());
                    stack.push(q);
                }
            }
        }
    }
    out
}

/// Every valid spec of the given kind, in a deterministic order.
pub fn valid_specs(tree: &RootedTree, kind: OpKind) -> Vec<OpSpec> {
    let mut out = Vec::new();
    match kind {
        OpKind::StarShift => {
            for v in tree.preorder() {
                let kids = tree.children(v);
                if kids.len() >= 2 && kids.iter().all(|&c| tree.is_leaf(c)) {
                    out.extend(kids.iter().map(|&u| OpSpec::star_shift(v, u)));
                }
            }
        }
        OpKind::BranchShift => {
            for p in downward_paths(tree) {
                for &b in tree.children(p[0]) {
                    if b != p[1] {
                        out.push(OpSpec::branch_shift(p.clone(), b));
                    }
                }
            }
        }
        OpKind::LeafSwap => {
            for p in downward_paths(tree) {
                let vk = *p.last().expect("non-empty");
                for &w1 in tree.children(p[0]) {
                    if w1 == p[1] || tree.is_leaf(w1) {
                        continue;
                    }
                    for &w2 in tree.children(vk) {
                        if tree.is_leaf(w2) {
                            out.push(OpSpec::leaf_swap(p.clone(), w1, w2));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A uniformly chosen valid spec, if any exists.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, tree: &RootedTree, kind: OpKind) -> Option<OpSpec> {
    valid_specs(tree, kind).choose(rng).cloned()
}
