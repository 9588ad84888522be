//! Exhaustive generation of rooted-tree classes up to isomorphism, and
//! extremality checks of the spectral radius over a class.
//!
//! Trees are built bottom-up from a table of canonical shapes indexed by
//! (vertices, leaves). A new tree picks its children as a non-increasing
//! sequence from that table, so each multiset of child subtrees, and hence
//! each isomorphism class, is produced once.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::families::Family;
use crate::spectral::{spectral_radius, SpectralError};
use crate::tree::{RootedTree, Shape};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumerationError {
    #[error("class has more than {0} trees")]
    ClassTooLarge(usize),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("no claimed maximizer of kind {check} for class {class}")]
    NoClaimedMaximizer { check: String, class: String },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// A class of rooted trees, all considered up to root-preserving isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeClass {
    /// All trees with exactly `N` vertices.
    ByVertices(usize),
    /// Trees with `leaves` leaves and at most `max_vertices` vertices.
    ByLeafCount { leaves: usize, max_vertices: usize },
    /// Trees with `N` vertices and `n` leaves.
    ByVerticesAndLeaves(usize, usize),
    /// Trees with a given outdegree multiset. Zeros may be omitted; if any are
    /// given, their number must equal the implied leaf count.
    ByOutdegreeSequence(Vec<usize>),
    /// Trees with `n` leaves and no vertex of outdegree 1.
    SeriesReduced(usize),
    /// Trees with `n` leaves whose internal vertices all have `d` children.
    DaryByLeaves(usize, usize),
}

impl fmt::Display for TreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeClass::ByVertices(n) => write!(f, "vertices:{n}"),
            TreeClass::ByLeafCount { leaves, max_vertices } => write!(f, "leaves:{leaves},{max_vertices}"),
            TreeClass::ByVerticesAndLeaves(n, l) => write!(f, "vertices-leaves:{n},{l}"),
            TreeClass::ByOutdegreeSequence(s) => {
                let s: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "outdegrees:{}", s.join(","))
            }
            TreeClass::SeriesReduced(n) => write!(f, "series-reduced:{n}"),
            TreeClass::DaryByLeaves(d, n) => write!(f, "dary-leaves:{d},{n}"),
        }
    }
}

impl FromStr for TreeClass {
    type Err = EnumerationError;

    /// `vertices:N`, `leaves:n,maxN`, `vertices-leaves:N,n`,
    /// `outdegrees:d1,d2,…`, `series-reduced:n`, `dary-leaves:d,n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EnumerationError::InvalidClass(s.to_string());
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let want = |k: usize| if nums.len() == k { Ok(()) } else { Err(bad()) };
        match name.trim() {
            "vertices" => want(1).map(|_| TreeClass::ByVertices(nums[0])),
            "leaves" => want(2).map(|_| TreeClass::ByLeafCount { leaves: nums[0], max_vertices: nums[1] }),
            "vertices-leaves" => want(2).map(|_| TreeClass::ByVerticesAndLeaves(nums[0], nums[1])),
            "outdegrees" => Ok(TreeClass::ByOutdegreeSequence(nums)),
            "series-reduced" => want(1).map(|_| TreeClass::SeriesReduced(nums[0])),
            "dary-leaves" => want(2).map(|_| TreeClass::DaryByLeaves(nums[0], nums[1])),
            _ => Err(bad()),
        }
    }
}

/// Non-zero outdegrees (descending) and the implied leaf count.
fn outdegree_profile(seq: &[usize]) -> Result<(Vec<usize>, usize), EnumerationError> {
    let mut nonzero: Vec<usize> = seq.iter().copied().filter(|&d| d > 0).collect();
    nonzero.sort_unstable_by(|a, b| b.cmp(a));
    let leaves = 1 + nonzero.iter().map(|d| d - 1).sum::<usize>();
    let zeros = seq.len() - nonzero.len();
    if zeros != 0 && zeros != leaves {
        return Err(EnumerationError::InvalidClass(format!(
            "{seq:?} has {zeros} zeros but implies {leaves} leaves"
        )));
    }
    Ok((nonzero, leaves))
}

/// Canonical shapes by (vertices, leaves) under an outdegree restriction.
pub struct ShapeTable {
    allowed: Vec<bool>,
    max_outdegree: usize,
    /// `table[n][l]`
    table: Vec<Vec<Vec<Shape>>>,
    cap: usize,
}

impl ShapeTable {
    /// Builds every entry with at most `max_vertices` vertices.
    pub fn build(max_vertices: usize, allowed: impl Fn(usize) -> bool, cap: usize) -> Result<Self, EnumerationError> {
        let allowed: Vec<bool> = (0..max_vertices.max(1)).map(|k| k > 0 && allowed(k)).collect();
        let max_outdegree = allowed.iter().rposition(|&a| a).unwrap_or(0);
        let mut t = ShapeTable {
            allowed,
            max_outdegree,
            table: vec![vec![Vec::new(); max_vertices + 1]; max_vertices + 1],
            cap,
        };
        if max_vertices >= 1 {
            t.table[1][1].push(Shape::leaf());
        }
        for n in 2..=max_vertices {
            for l in 1..n {
                let mut out = Vec::new();
                let mut cur = Vec::new();
                t.compose(n - 1, l, (n - 1, l, usize::MAX), &mut cur, &mut out)?;
                t.table[n][l] = out;
            }
        }
        Ok(t)
    }

    pub fn get(&self, vertices: usize, leaves: usize) -> &[Shape] {
        self.table
            .get(vertices)
            .and_then(|row| row.get(leaves))
            .map_or(&[], Vec::as_slice)
    }

    /// Extends `cur` with children (each at most `bound` in table order)
    /// using exactly `n_rem` vertices and `l_rem` leaves.
    fn compose(
        &self,
        n_rem: usize,
        l_rem: usize,
        bound: (usize, usize, usize),
        cur: &mut Vec<Shape>,
        out: &mut Vec<Shape>,
    ) -> Result<(), EnumerationError> {
        if n_rem == 0 {
            if l_rem == 0 && self.allowed.get(cur.len()).copied().unwrap_or(false) {
                let mut kids = cur.clone();
                kids.sort_by(|a, b| b.cmp(a));
                out.push(Shape::node(kids));
                if out.len() > self.cap {
                    return Err(EnumerationError::ClassTooLarge(self.cap));
                }
            }
            return Ok(());
        }
        if l_rem == 0 || cur.len() >= self.max_outdegree {
            return Ok(());
        }
        for n in (1..=n_rem.min(bound.0)).rev() {
            let l_top = if n == bound.0 { bound.1 } else { n };
            for l in (1..=l_top.min(l_rem).min(n)).rev() {
                let list = &self.table[n][l];
                let top = if (n, l) == (bound.0, bound.1) { bound.2.saturating_add(1) } else { usize::MAX };
                for idx in (0..list.len().min(top)).rev() {
                    cur.push(list[idx].clone());
                    self.compose(n_rem - n, l_rem - l, (n, l, idx), cur, out)?;
                    cur.pop();
                }
            }
        }
        Ok(())
    }
}

impl TreeClass {
    /// Canonical shapes of the class, each isomorphism class once.
    pub fn shapes(&self, cap: usize) -> Result<Vec<Shape>, EnumerationError> {
        let collect = |table: &ShapeTable, cells: &[(usize, usize)]| -> Result<Vec<Shape>, EnumerationError> {
            let mut out = Vec::new();
            for &(n, l) in cells {
                out.extend_from_slice(table.get(n, l));
                if out.len() > cap {
                    return Err(EnumerationError::ClassTooLarge(cap));
                }
            }
            Ok(out)
        };
        match self {
            TreeClass::ByVertices(n) => {
                let t = ShapeTable::build(*n, |_| true, cap)?;
                let cells: Vec<_> = (1..=*n).map(|l| (*n, l)).collect();
                collect(&t, &cells)
            }
            TreeClass::ByLeafCount { leaves, max_vertices } => {
                let t = ShapeTable::build(*max_vertices, |_| true, cap)?;
                let cells: Vec<_> = (*leaves..=*max_vertices).map(|n| (n, *leaves)).collect();
                collect(&t, &cells)
            }
            TreeClass::ByVerticesAndLeaves(n, l) => {
                let t = ShapeTable::build(*n, |_| true, cap)?;
                collect(&t, &[(*n, *l)])
            }
            TreeClass::ByOutdegreeSequence(seq) => {
                let (nonzero, leaves) = outdegree_profile(seq)?;
                let n = nonzero.len() + leaves;
                let t = ShapeTable::build(n, |k| nonzero.contains(&k), cap)?;
                let shapes = collect(&t, &[(n, leaves)])?;
                Ok(shapes
                    .into_iter()
                    .filter(|s| RootedTree::from_shape(s).outdegree_sequence()[..nonzero.len()] == nonzero[..])
                    .collect())
            }
            TreeClass::SeriesReduced(l) => {
                if *l == 0 {
                    return Ok(Vec::new());
                }
                let max_n = 2 * l - 1;
                let t = ShapeTable::build(max_n, |k| k >= 2, cap)?;
                let cells: Vec<_> = (*l..=max_n).map(|n| (n, *l)).collect();
                collect(&t, &cells)
            }
            TreeClass::DaryByLeaves(d, l) => {
                if *d < 2 {
                    return Err(EnumerationError::InvalidClass("arity must be at least 2".into()));
                }
                if *l == 0 || (l - 1) % (d - 1) != 0 {
                    return Ok(Vec::new());
                }
                let n = l + (l - 1) / (d - 1);
                let t = ShapeTable::build(n, |k| k == *d, cap)?;
                collect(&t, &[(n, *l)])
            }
        }
    }
}

/// Trees of the class numbered in preorder, in generation order.
pub fn enumerate_class(class: &TreeClass) -> Result<Vec<RootedTree>, EnumerationError> {
    enumerate_class_capped(class, DEFAULT_CAP)
}

pub fn enumerate_class_capped(class: &TreeClass, cap: usize) -> Result<Vec<RootedTree>, EnumerationError> {
    Ok(class.shapes(cap)?.iter().map(RootedTree::from_shape).collect())
}

/// Every tree with at most `max_leaves` leaves that either has at most
/// `max_leaves + 1` vertices or is series-reduced, ordered by
/// (leaves, vertices, canonical encoding).
///
/// Any outdegree class is either wholly inside or wholly outside this set.
pub fn leaf_bounded_corpus(max_leaves: usize) -> Result<Vec<RootedTree>, EnumerationError> {
    let mut seen = std::collections::BTreeMap::new();
    let small = ShapeTable::build(max_leaves + 1, |_| true, DEFAULT_CAP)?;
    for n in 1..=max_leaves + 1 {
        for l in 1..=max_leaves.min(n) {
            for s in small.get(n, l) {
                seen.insert((l, n, s.encode()), s.clone());
            }
        }
    }
    for l in 1..=max_leaves {
        for s in TreeClass::SeriesReduced(l).shapes(DEFAULT_CAP)? {
            seen.insert((l, s.vertex_count(), s.encode()), s);
        }
    }
    Ok(seen.values().map(RootedTree::from_shape).collect())
}

/// The tree a maximality theorem names for a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Greedy caterpillar of an outdegree multiset.
    Greedy,
    /// `Broom(N − n − 1, n)` for `N` vertices and `n` leaves.
    Broom,
    /// Binary caterpillar for series-reduced trees.
    BinaryCaterpillar,
}

impl FromStr for Check {
    type Err = EnumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Check::Greedy),
            "broom" => Ok(Check::Broom),
            "binary-caterpillar" | "caterpillar" => Ok(Check::BinaryCaterpillar),
            _ => Err(EnumerationError::InvalidClass(format!("unknown check {s}"))),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Greedy => "greedy",
            Check::Broom => "broom",
            Check::BinaryCaterpillar => "binary-caterpillar",
        })
    }
}

pub fn claimed_maximizer(class: &TreeClass, check: Check) -> Result<RootedTree, EnumerationError> {
    let none = || EnumerationError::NoClaimedMaximizer { check: check.to_string(), class: class.to_string() };
    let family = match (check, class) {
        (Check::Greedy, TreeClass::ByOutdegreeSequence(s)) => Family::GreedyCaterpillar(s.clone()),
        (Check::Broom, TreeClass::ByVerticesAndLeaves(n, l)) if *l >= 1 && n > l => {
            Family::Broom { path: n - l - 1, leaves: *l }
        }
        (Check::BinaryCaterpillar, TreeClass::SeriesReduced(l)) if *l >= 1 => Family::BinaryCaterpillar(*l),
        _ => return Err(none()),
    };
    family.generate().map_err(|_| none())
}

#[derive(Debug, Clone)]
pub struct ExtremalReport {
    /// The claimed tree lies in the class and attains the maximum within `tol`.
    pub holds: bool,
    /// Maximizer with the smallest canonical encoding among the ties.
    pub argmax: RootedTree,
    pub rho_max: f64,
    pub claimed_rho: f64,
    pub claimed_in_class: bool,
    /// Every tree within `tol` of the maximum, ordered by canonical encoding.
    pub ties: Vec<RootedTree>,
    pub class_size: usize,
}

pub fn verify_extremal(class: &TreeClass, claimed: &RootedTree, tol: f64) -> Result<ExtremalReport, EnumerationError> {
    let trees = enumerate_class(class)?;
    verify_extremal_over(&trees, claimed, tol)
}

/// Extremality over an already enumerated class.
pub fn verify_extremal_over(trees: &[RootedTree], claimed: &RootedTree, tol: f64) -> Result<ExtremalReport, EnumerationError> {
    if trees.is_empty() {
        return Err(EnumerationError::InvalidClass("empty class".into()));
    }
    let rhos: Vec<f64> = trees
        .par_iter()
        .map(|t| spectral_radius(t, crate::spectral::DEFAULT_TOL).map(|s| s.rho))
        .collect::<Result<_, _>>()?;
    let rho_max = rhos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut ties: Vec<(String, &RootedTree)> = trees
        .iter()
        .zip(&rhos)
        .filter(|(_, &r)| r >= rho_max - tol)
        .map(|(t, _)| (t.canonical_encoding(), t))
        .collect();
    ties.sort_by(|a, b| a.0.cmp(&b.0));
    let claimed_code = claimed.canonical_encoding();
    let claimed_in_class = trees.iter().any(|t| t.canonical_encoding() == claimed_code);
    let claimed_rho = spectral_radius(claimed, crate::spectral::DEFAULT_TOL)?.rho;
    Ok(ExtremalReport {
        holds: claimed_in_class && claimed_rho >= rho_max - tol,
        argmax: ties[0].1.clone(),
        rho_max,
        claimed_rho,
        claimed_in_class,
        ties: ties.into_iter().map(|(_, t)| t.clone()).collect(),
        class_size: trees.len(),
    })
}
