//! Bounds on the ancestral spectral radius and the quantities they use.
//!
//! Bound values are kept as exact rationals; only the final comparison with
//! the numeric spectral radius uses a float tolerance.

use std::collections::{BTreeMap, VecDeque};

use num_rational::Ratio;
use thiserror::Error;

use crate::matrices::ancestral_matrix;
use crate::spectral::{spectral_radius, SpectralError, DEFAULT_TOL};
use crate::tree::{RootedTree, TreeError, Vertex};

/// Absolute tolerance for comparing exact bounds with a numeric radius.
pub const BOUND_TOL: f64 = 1e-7;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("bounds are not defined for the single-vertex tree")]
    SingleVertexTree,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `ad(v) = Σ_w ℓ(v ∨ w)`, the row sum of `v` in the ancestral matrix.
pub fn total_ancestral_depth(tree: &RootedTree, v: Vertex) -> Result<u64, TreeError> {
    tree.check_leaf(v)?;
    tree.leaves()
        .iter()
        .map(|&w| tree.ancestral_level(v, w).map(|l| l as u64))
        .sum()
}

/// Graph distances from `v` to every vertex, by BFS on the undirected tree.
pub fn distances_from(tree: &RootedTree, v: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; tree.vertex_count()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let nbrs = tree.children(x).iter().copied().chain(tree.parent(x));
        for y in nbrs {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// `D_T(v)`: sum of distances from `v` to all leaves.
pub fn leaf_distance_sum(tree: &RootedTree, v: Vertex) -> usize {
    let d = distances_from(tree, v);
    tree.leaves().iter().map(|&w| d[w]).sum()
}

/// `ad(v)` through distances: `(L·d(v,r) + D_T(r) − D_T(v)) / 2`.
pub fn total_ancestral_depth_by_distances(tree: &RootedTree, v: Vertex) -> Result<u64, TreeError> {
    tree.check_leaf(v)?;
    let l = tree.leaf_count();
    let twice = l * tree.level(v) + leaf_distance_sum(tree, tree.root()) - leaf_distance_sum(tree, v);
    Ok((twice / 2) as u64)
}

/// Terminal Wiener index: sum of distances over unordered leaf pairs.
pub fn terminal_wiener(tree: &RootedTree) -> u64 {
    let leaves = tree.leaves();
    leaves
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = distances_from(tree, v);
            leaves[i + 1..].iter().map(|&w| d[w] as u64).sum::<u64>()
        })
        .sum()
}

/// `Q(T) = Σ_v ad(v)`, the sum of all ancestral-matrix entries.
pub fn q_value(tree: &RootedTree) -> u64 {
    ancestral_matrix(tree).total()
}

/// `Q(T)` through `Q(T) = Σ_i (Q(T_i) + L(T_i)²)` over the root branches.
pub fn q_recursive(tree: &RootedTree) -> u64 {
    fn go(t: &RootedTree, v: Vertex) -> (u64, u64) {
        // (Q, L) of the subtree at v
        let kids = t.children(v);
        if kids.is_empty() {
            return (0, 1);
        }
        kids.iter().fold((0, 0), |(q, l), &c| {
            let (qc, lc) = go(t, c);
            (q + qc + lc * lc, l + lc)
        })
    }
    go(tree, tree.root()).0
}

pub fn q_recursion_check(tree: &RootedTree) -> bool {
    q_recursive(tree) == q_value(tree)
}

/// `Some(Δ)` when every internal vertex has `Δ ≥ 2` children and all leaves
/// share one level.
pub fn complete_arity(tree: &RootedTree) -> Option<usize> {
    let d = tree.max_outdegree();
    let h = tree.height();
    let uniform = (0..tree.vertex_count()).all(|v| tree.is_leaf(v) || tree.outdegree(v) == d);
    let level = tree.leaves().iter().all(|&v| tree.level(v) == h);
    (d >= 2 && uniform && level).then_some(d)
}

/// One named inequality `lower ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub bound: f64,
    /// `rho − bound` for lower bounds, `bound − rho` for upper bounds.
    pub margin: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub rho: f64,
    pub avg_ad: Rational,
    pub max_ad: i64,
    pub tw_bound: Rational,
    pub height_bound: i64,
    /// `(L−1)/(Δ−1)`; absent when `Δ = 1`.
    pub delta_bound: Option<Rational>,
    pub q: i64,
    pub terminal_wiener: i64,
    pub checks: Vec<BoundCheck>,
    pub all_satisfied: bool,
    pub margins: BTreeMap<&'static str, f64>,
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn bound_report(tree: &RootedTree) -> Result<BoundReport, BoundsError> {
    bound_report_with_tol(tree, BOUND_TOL)
}

pub fn bound_report_with_tol(tree: &RootedTree, tol: f64) -> Result<BoundReport, BoundsError> {
    if tree.vertex_count() == 1 {
        return Err(BoundsError::SingleVertexTree);
    }
    let rho = spectral_radius(tree, DEFAULT_TOL)?.rho;
    let l = tree.leaf_count() as i64;
    let c = ancestral_matrix(tree);
    let ads: Vec<i64> = (0..c.size()).map(|i| c.row(i).iter().sum::<u64>() as i64).collect();
    let q: i64 = ads.iter().sum();
    let max_ad = *ads.iter().max().expect("at least one leaf");
    let avg_ad = Rational::new(q, l);
    let tw = terminal_wiener(tree) as i64;
    let d_root = tree.root_distance_sum() as i64;
    let tw_bound = Rational::from_integer(d_root) - Rational::new(tw, l);
    let height_bound = tree.height() as i64;
    let delta = tree.max_outdegree() as i64;
    let delta_bound = (delta >= 2).then(|| Rational::new(l - 1, delta - 1));

    let mut checks = vec![
        lower("avg_ad", to_f64(&avg_ad), rho, tol),
        upper("max_ad", max_ad as f64, rho, tol),
        lower("tw_bound", to_f64(&tw_bound), rho, tol),
        lower("height_bound", height_bound as f64, rho, tol),
    ];
    if let Some(db) = &delta_bound {
        checks.push(lower("delta_bound", to_f64(db), rho, tol));
    }
    let all_satisfied = checks.iter().all(|c| c.satisfied);
    let margins = checks.iter().map(|c| (c.name, c.margin)).collect();
    Ok(BoundReport {
        rho,
        avg_ad,
        max_ad,
        tw_bound,
        height_bound,
        delta_bound,
        q,
        terminal_wiener: tw,
        checks,
        all_satisfied,
        margins,
    })
}

fn lower(name: &'static str, bound: f64, rho: f64, tol: f64) -> BoundCheck {
    BoundCheck { name, bound, margin: rho - bound, satisfied: rho >= bound - tol }
}

fn upper(name: &'static str, bound: f64, rho: f64, tol: f64) -> BoundCheck {
    BoundCheck { name, bound, margin: bound - rho, satisfied: rho <= bound + tol }
}

/// `Q(T) ≥ L(L−1)/(Δ−1)`, checked exactly; vacuous when `Δ < 2`.
pub fn q_lower_bound_holds(tree: &RootedTree) -> bool {
    let delta = tree.max_outdegree() as i64;
    if delta < 2 {
        return true;
    }
    let l = tree.leaf_count() as i64;
    Rational::from_integer(q_value(tree) as i64) >= Rational::new(l * (l - 1), delta - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{random_tree_max_leaves, Family};
    use crate::newick::parse_newick;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_tree() -> RootedTree {
        parse_newick("((,),(,,(,)));").unwrap()
    }

    #[test]
    fn ancestral_depth_examples() {
        let t = sample_tree();
        // fifth leaf, the first one at level 3
        let v5 = t.leaves()[4];
        assert_eq!(total_ancestral_depth(&t, v5).unwrap(), 7);
        assert_eq!(total_ancestral_depth_by_distances(&t, v5).unwrap(), 7);
        assert_eq!(total_ancestral_depth(&RootedTree::single_vertex(), 0).unwrap(), 0);
        let star = Family::Star(4).generate().unwrap();
        assert_eq!(total_ancestral_depth(&star, 2).unwrap(), 1);
        assert_eq!(total_ancestral_depth(&t, t.root()), Err(TreeError::NotALeaf(0)));
    }

    #[test]
    fn terminal_wiener_examples() {
        assert_eq!(terminal_wiener(&Family::Star(3).generate().unwrap()), 6);
        assert_eq!(terminal_wiener(&RootedTree::single_vertex()), 0);
        let t = sample_tree();
        assert_eq!(terminal_wiener(&t), 54);
        assert_eq!(6 * 14 - q_value(&t), 54);
    }

    #[test]
    fn q_recursion_examples() {
        let t = sample_tree();
        assert!(q_recursion_check(&t));
        assert_eq!(q_value(&t), 30);
        assert!(q_recursion_check(&RootedTree::single_vertex()));
        assert_eq!(q_value(&RootedTree::single_vertex()), 0);
        let star = Family::Star(6).generate().unwrap();
        assert!(q_recursion_check(&star));
        assert_eq!(q_value(&star), 6);
    }

    #[test]
    fn report_equality_cases() {
        let ternary = Family::CompleteDary { arity: 3, height: 2 }.generate().unwrap();
        let r = bound_report(&ternary).unwrap();
        assert_eq!(r.delta_bound, Some(Rational::from_integer(4)));
        assert!((r.rho - 4.0).abs() < 1e-9);
        assert!(r.all_satisfied);
        assert_eq!(complete_arity(&ternary), Some(3));

        let sp = Family::StarPlusPath { leaves: 3, path: 5 }.generate().unwrap();
        let r = bound_report(&sp).unwrap();
        assert_eq!(r.height_bound, 5);
        assert!((r.rho - 5.0).abs() < 1e-9);

        let s5 = Family::Star(5).generate().unwrap();
        let r = bound_report(&s5).unwrap();
        assert_eq!(r.avg_ad, Rational::from_integer(1));
        assert_eq!(r.max_ad, 1);
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert!(matches!(bound_report(&RootedTree::single_vertex()), Err(BoundsError::SingleVertexTree)));
    }

    #[test]
    fn random_trees_satisfy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let t = random_tree_max_leaves(&mut rng, 10);
            let l = t.leaf_count() as u64;
            let q = q_value(&t);
            assert_eq!(q, l * t.root_distance_sum() as u64 - terminal_wiener(&t));
            assert!(q_recursion_check(&t));
            assert!(q_lower_bound_holds(&t));
            for &v in t.leaves() {
                assert_eq!(total_ancestral_depth(&t, v), total_ancestral_depth_by_distances(&t, v));
            }
            if t.vertex_count() > 1 {
                let r = bound_report(&t).unwrap();
                assert!(r.all_satisfied, "{r:?}");
                assert_eq!(r.tw_bound, r.avg_ad);
                assert!(r.avg_ad <= Rational::from_integer(r.max_ad));
            }
        }
    }
}
