//! Rooted trees stored as a vertex arena.
//!
//! Vertices are dense `0..n` indices. The children of a vertex are kept in
//! insertion order, and the leaves are ordered by vertex index. That leaf
//! order is the row/column order of every matrix built from the tree.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Index of a vertex inside a [`RootedTree`].
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("parent list is empty")]
    Empty,
    #[error("no vertex without a parent")]
    NoRoot,
    #[error("vertices {0} and {1} both have no parent")]
    MultipleRoots(Vertex, Vertex),
    #[error("vertex {0} lies on a cycle")]
    CycleDetected(Vertex),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(Vertex),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(Vertex),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// An unordered-or-ordered tree shape: a vertex is the list of its children.
///
/// Shapes are the exchange format between generators, the Newick parser,
/// the enumerator and [`RootedTree`]. Converting a shape to a tree numbers
/// the vertices in preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Shape(pub Vec<Shape>);

impl Shape {
    pub fn leaf() -> Self {
        Shape(Vec::new())
    }

    pub fn node(children: Vec<Shape>) -> Self {
        Shape(children)
    }

    pub fn is_leaf(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.0.iter().map(Shape::vertex_count).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.0.is_empty() {
            1
        } else {
            self.0.iter().map(Shape::leaf_count).sum()
        }
    }

    /// Recursively sorts children so that isomorphic shapes compare equal.
    pub fn canonical(&self) -> Shape {
        let mut kids: Vec<Shape> = self.0.iter().map(Shape::canonical).collect();
        kids.sort_by(|a, b| b.cmp(a));
        Shape(kids)
    }

    /// Parenthesis encoding: a vertex is `(` + children + `)`.
    pub fn encode(&self) -> String {
        let mut out = String::with_capacity(2 * self.vertex_count());
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut String) {
        out.push('(');
        for c in &self.0 {
            c.encode_into(out);
        }
        out.push(')');
    }

    /// Canonical encoding; equal iff the shapes are isomorphic as rooted trees.
    pub fn canonical_encoding(&self) -> String {
        self.canonical().encode()
    }
}

/// A rooted tree with a fixed vertex numbering.
#[derive(Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    level: Vec<usize>,
    root: Vertex,
    leaves: Vec<Vertex>,
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootedTree")
            .field("parent", &self.parent)
            .finish()
    }
}

/// Summary counts of a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralStats {
    pub leaves: usize,
    pub height: usize,
    pub internal: usize,
    /// Outdegrees of all vertices, sorted descending.
    pub outdegree_sequence: Vec<usize>,
    pub max_outdegree: usize,
    /// Sum of leaf levels.
    pub root_distance_sum: usize,
}

impl RootedTree {
    /// Builds a tree from a parent list; exactly one entry must be `None`.
    pub fn from_parents(parents: &[Option<Vertex>]) -> Result<Self, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(v),
                    Some(r) => return Err(TreeError::MultipleRoots(r, v)),
                },
                Some(p) if p >= n => return Err(TreeError::IndexOutOfRange(p)),
                Some(p) if p == v => return Err(TreeError::CycleDetected(v)),
                Some(p) => children[p].push(v),
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        let mut level = vec![usize::MAX; n];
        level[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                level[c] = level[v] + 1;
                queue.push_back(c);
            }
        }
        // every vertex has one parent, so an unreached vertex sits on a cycle
        if let Some(v) = level.iter().position(|&l| l == usize::MAX) {
            return Err(TreeError::CycleDetected(v));
        }

        let leaves = (0..n).filter(|&v| children[v].is_empty()).collect();
        Ok(RootedTree {
            parent: parents.to_vec(),
            children,
            level,
            root,
            leaves,
        })
    }

    /// Builds a tree from a shape with vertices numbered in preorder.
    pub fn from_shape(shape: &Shape) -> Self {
        let mut parents = Vec::with_capacity(shape.vertex_count());
        fn walk(s: &Shape, parent: Option<Vertex>, out: &mut Vec<Option<Vertex>>) {
            let me = out.len();
            out.push(parent);
            for c in &s.0 {
                walk(c, Some(me), out);
            }
        }
        walk(shape, None, &mut parents);
        RootedTree::from_parents(&parents).expect("shapes are always trees")
    }

    pub fn single_vertex() -> Self {
        RootedTree::from_shape(&Shape::leaf())
    }

    /// Ordered shape of the subtree rooted at `v`.
    pub fn shape_at(&self, v: Vertex) -> Shape {
        Shape(self.children[v].iter().map(|&c| self.shape_at(c)).collect())
    }

    pub fn shape(&self) -> Shape {
        self.shape_at(self.root)
    }

    /// Isomorphism class key (root-respecting, children order ignored).
    pub fn canonical_encoding(&self) -> String {
        self.shape().canonical_encoding()
    }

    pub fn is_isomorphic(&self, other: &RootedTree) -> bool {
        self.canonical_encoding() == other.canonical_encoding()
    }

    /// Same shape renumbered in preorder.
    pub fn to_preorder(&self) -> RootedTree {
        RootedTree::from_shape(&self.shape())
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<Vertex>] {
        &self.parent
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn level(&self, v: Vertex) -> usize {
        self.level[v]
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.children[v].len()
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.children[v].is_empty()
    }

    /// Leaves in matrix order (ascending vertex index).
    pub fn leaves(&self) -> &[Vertex] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Position of leaf `v` in [`RootedTree::leaves`].
    pub fn leaf_position(&self, v: Vertex) -> Option<usize> {
        self.leaves.binary_search(&v).ok()
    }

    pub fn height(&self) -> usize {
        self.leaves.iter().map(|&v| self.level[v]).max().unwrap_or(0)
    }

    pub fn internal_count(&self) -> usize {
        self.vertex_count() - self.leaf_count()
    }

    pub fn max_outdegree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Outdegree multiset, sorted descending.
    pub fn outdegree_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = self.children.iter().map(Vec::len).collect();
        seq.sort_unstable_by(|a, b| b.cmp(a));
        seq
    }

    /// Sum of the levels of all leaves.
    pub fn root_distance_sum(&self) -> usize {
        self.leaves.iter().map(|&v| self.level[v]).sum()
    }

    pub fn stats(&self) -> StructuralStats {
        StructuralStats {
            leaves: self.leaf_count(),
            height: self.height(),
            internal: self.internal_count(),
            outdegree_sequence: self.outdegree_sequence(),
            max_outdegree: self.max_outdegree(),
            root_distance_sum: self.root_distance_sum(),
        }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), TreeError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(TreeError::IndexOutOfRange(v))
        }
    }

    pub fn check_leaf(&self, v: Vertex) -> Result<(), TreeError> {
        self.check_vertex(v)?;
        if self.is_leaf(v) {
            Ok(())
        } else {
            Err(TreeError::NotALeaf(v))
        }
    }

    /// Lowest common ancestor by walking parents after aligning levels.
    pub fn lca(&self, u: Vertex, v: Vertex) -> Result<Vertex, TreeError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let (mut a, mut b) = (u, v);
        while self.level[a] > self.level[b] {
            a = self.parent[a].expect("non-root has a parent");
        }
        while self.level[b] > self.level[a] {
            b = self.parent[b].expect("non-root has a parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root has a parent");
            b = self.parent[b].expect("non-root has a parent");
        }
        Ok(a)
    }

    /// Level of the lowest common ancestor of `u` and `v`.
    pub fn ancestral_level(&self, u: Vertex, v: Vertex) -> Result<usize, TreeError> {
        Ok(self.level[self.lca(u, v)?])
    }

    /// True if `a` lies on the path from `v` to the root (including `v`).
    pub fn is_ancestor(&self, a: Vertex, v: Vertex) -> bool {
        let mut x = Some(v);
        while let Some(y) = x {
            if self.level[y] < self.level[a] {
                return false;
            }
            if y == a {
                return true;
            }
            x = self.parent[y];
        }
        false
    }

    /// Vertices of the subtree rooted at `v`, in preorder.
    pub fn descendants(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.children[x].iter().rev());
        }
        out
    }

    /// Leaves below `v` (or `v` itself if it is a leaf), in matrix order.
    pub fn leaves_below(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .descendants(v)
            .into_iter()
            .filter(|&x| self.is_leaf(x))
            .collect();
        out.sort_unstable();
        out
    }

    /// All vertices in preorder from the root.
    pub fn preorder(&self) -> Vec<Vertex> {
        self.descendants(self.root)
    }

    /// Edges identified by their lower endpoint, in ascending child index.
    pub fn edges(&self) -> Vec<Vertex> {
        (0..self.vertex_count()).filter(|&v| v != self.root).collect()
    }

    /// Subtree rooted at `v` as a standalone tree (preorder numbering).
    pub fn subtree(&self, v: Vertex) -> RootedTree {
        RootedTree::from_shape(&self.shape_at(v))
    }

    /// Like [`RootedTree::subtree`], also returning the original vertex of
    /// each subtree vertex.
    pub fn subtree_with_map(&self, v: Vertex) -> (RootedTree, Vec<Vertex>) {
        (self.subtree(v), self.descendants(v))
    }
}
