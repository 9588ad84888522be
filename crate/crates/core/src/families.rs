//! Deterministic generators for the named tree families, plus a simple
//! random generator used for fuzzing.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::tree::{RootedTree, Shape, TreeError};

/// A named, parameterised family of rooted trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Root with `n` leaf children.
    Star(usize),
    /// Broom whose leaves sit at level `h`: `Broom(h - 1, n)`.
    PathBroom { height: usize, leaves: usize },
    /// `n` leaves attached to the far end of a path of length `m` from the root.
    Broom { path: usize, leaves: usize },
    /// `n - 1` internal vertices on a path from the root, each with two children.
    BinaryCaterpillar(usize),
    /// All internal vertices have `d` children, all leaves at level `h`.
    CompleteDary { arity: usize, height: usize },
    /// Caterpillar realising an outdegree multiset, outdegrees ascending from the root.
    GreedyCaterpillar(Vec<usize>),
    /// Root with `n` leaves plus a pendant path of length `h`.
    StarPlusPath { leaves: usize, path: usize },
}

fn invalid(msg: impl Into<String>) -> TreeError {
    TreeError::InvalidParameter(msg.into())
}

fn path_to(length: usize, end: Shape) -> Shape {
    (0..length).fold(end, |acc, _| Shape::node(vec![acc]))
}

fn leaves(n: usize) -> Vec<Shape> {
    vec![Shape::leaf(); n]
}

impl Family {
    pub fn shape(&self) -> Result<Shape, TreeError> {
        match self {
            Family::Star(n) => {
                if *n == 0 {
                    return Err(invalid("star needs at least one leaf"));
                }
                Ok(Shape::node(leaves(*n)))
            }
            Family::PathBroom { height, leaves } => {
                if *height == 0 {
                    return Err(invalid("path broom height must be positive"));
                }
                Family::Broom { path: height - 1, leaves: *leaves }.shape()
            }
            Family::Broom { path, leaves: n } => {
                if *n == 0 {
                    return Err(invalid("broom needs at least one leaf"));
                }
                Ok(path_to(*path, Shape::node(leaves(*n))))
            }
            Family::BinaryCaterpillar(n) => {
                if *n == 0 {
                    return Err(invalid("caterpillar needs at least one leaf"));
                }
                let mut s = Shape::leaf();
                for i in 1..*n {
                    s = if i == 1 {
                        Shape::node(leaves(2))
                    } else {
                        Shape::node(vec![Shape::leaf(), s])
                    };
                }
                Ok(s)
            }
            Family::CompleteDary { arity, height } => {
                if *arity < 2 {
                    return Err(invalid("arity must be at least 2"));
                }
                let mut s = Shape::leaf();
                for _ in 0..*height {
                    s = Shape::node(vec![s; *arity]);
                }
                Ok(s)
            }
            Family::GreedyCaterpillar(seq) => {
                let mut degrees: Vec<usize> = seq.iter().copied().filter(|&d| d > 0).collect();
                degrees.sort_unstable();
                let Some((&last, rest)) = degrees.split_last() else {
                    return Ok(Shape::leaf());
                };
                let mut s = Shape::node(leaves(last));
                for &d in rest.iter().rev() {
                    let mut kids = leaves(d - 1);
                    kids.push(s);
                    s = Shape::node(kids);
                }
                Ok(s)
            }
            Family::StarPlusPath { leaves: n, path } => {
                if *path == 0 {
                    return Err(invalid("pendant path length must be positive"));
                }
                let mut kids = leaves(*n);
                kids.push(path_to(path - 1, Shape::leaf()));
                Ok(Shape::node(kids))
            }
        }
    }

    /// Builds the family member, numbered in preorder.
    pub fn generate(&self) -> Result<RootedTree, TreeError> {
        let tree = RootedTree::from_shape(&self.shape()?);
        if let Family::GreedyCaterpillar(seq) = self {
            let mut want: Vec<usize> = seq.iter().copied().filter(|&d| d > 0).collect();
            want.sort_unstable_by(|a, b| b.cmp(a));
            let got: Vec<usize> = tree.outdegree_sequence().into_iter().filter(|&d| d > 0).collect();
            if want != got {
                return Err(invalid(format!("{seq:?} is not realisable as an outdegree multiset")));
            }
        }
        Ok(tree)
    }
}

/// Parses the `name:comma-separated-ints` generator grammar.
impl FromStr for Family {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse::<usize>().map_err(|_| invalid(format!("bad integer {a:?}"))))
                .collect::<Result<_, _>>()?
        };
        let want = |k: usize| -> Result<(), TreeError> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(invalid(format!("{name} takes {k} parameter(s), got {}", nums.len())))
            }
        };
        Ok(match name.trim() {
            "star" => {
                want(1)?;
                Family::Star(nums[0])
            }
            "path-broom" => {
                want(2)?;
                Family::PathBroom { height: nums[0], leaves: nums[1] }
            }
            "broom" => {
                want(2)?;
                Family::Broom { path: nums[0], leaves: nums[1] }
            }
            "binary-caterpillar" | "caterpillar" => {
                want(1)?;
                Family::BinaryCaterpillar(nums[0])
            }
            "dary" => {
                want(2)?;
                Family::CompleteDary { arity: nums[0], height: nums[1] }
            }
            "greedy" => Family::GreedyCaterpillar(nums),
            "star-plus-path" => {
                want(2)?;
                Family::StarPlusPath { leaves: nums[0], path: nums[1] }
            }
            other => return Err(invalid(format!("unknown family {other:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Star(n) => write!(f, "star:{n}"),
            Family::PathBroom { height, leaves } => write!(f, "path-broom:{height},{leaves}"),
            Family::Broom { path, leaves } => write!(f, "broom:{path},{leaves}"),
            Family::BinaryCaterpillar(n) => write!(f, "binary-caterpillar:{n}"),
            Family::CompleteDary { arity, height } => write!(f, "dary:{arity},{height}"),
            Family::GreedyCaterpillar(seq) => {
                let parts: Vec<String> = seq.iter().map(usize::to_string).collect();
                write!(f, "greedy:{}", parts.join(","))
            }
            Family::StarPlusPath { leaves, path } => write!(f, "star-plus-path:{leaves},{path}"),
        }
    }
}

/// Random recursive tree on `vertices` vertices, renumbered in preorder.
///
/// Each new vertex picks a uniformly random existing parent. The resulting
/// distribution over shapes is not uniform; it is meant for fuzzing.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, vertices: usize) -> RootedTree {
    let vertices = vertices.max(1);
    let mut parents = vec![None];
    for v in 1..vertices {
        parents.push(Some(rng.gen_range(0..v)));
    }
    RootedTree::from_parents(&parents)
        .expect("attachment always yields a tree")
        .to_preorder()
}

/// Random tree with between 1 and `max_leaves` leaves.
pub fn random_tree_max_leaves<R: Rng + ?Sized>(rng: &mut R, max_leaves: usize) -> RootedTree {
    loop {
        let n = rng.gen_range(1..=2 * max_leaves.max(1));
        let t = random_tree(rng, n);
        if t.leaf_count() <= max_leaves {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn broom_two_three() {
        let t = Family::Broom { path: 2, leaves: 3 }.generate().unwrap();
        assert_eq!(t.vertex_count(), 6);
        assert_eq!(t.leaf_count(), 3);
        assert!(t.leaves().iter().all(|&v| t.level(v) == 3));
        let p = Family::PathBroom { height: 3, leaves: 3 }.generate().unwrap();
        assert_eq!(p, t);
    }

    #[test]
    fn complete_ternary() {
        let t = Family::CompleteDary { arity: 3, height: 2 }.generate().unwrap();
        assert_eq!(t.vertex_count(), 13);
        assert_eq!(t.leaf_count(), 9);
        assert_eq!(t.internal_count(), 4);
        assert_eq!(t.internal_count(), (9 - 1) / (3 - 1));
    }

    #[test]
    fn greedy_caterpillar_matches_picture() {
        let t = Family::GreedyCaterpillar(vec![5, 5, 3, 1, 1, 0, 0]).generate().unwrap();
        // root -> a -> b; b: leaf, c, leaf; c: 2 leaves, d, 2 leaves; d: 5 leaves
        let five = Shape::node(leaves(5));
        let c = Shape::node(vec![Shape::leaf(), Shape::leaf(), five, Shape::leaf(), Shape::leaf()]);
        let b = Shape::node(vec![Shape::leaf(), c, Shape::leaf()]);
        let pictured = Shape::node(vec![Shape::node(vec![b])]);
        assert!(t.is_isomorphic(&RootedTree::from_shape(&pictured)));
        assert_eq!(t.leaf_count(), 11);
    }

    #[test]
    fn greedy_rejects_inconsistent_input() {
        // a lone outdegree 0 list is the single vertex
        assert_eq!(Family::GreedyCaterpillar(vec![0]).generate().unwrap().vertex_count(), 1);
        // outdegrees ascend from the root
        let t = Family::GreedyCaterpillar(vec![3, 2]).generate().unwrap();
        assert_eq!(t.outdegree(t.root()), 2);
    }

    #[test]
    fn caterpillar_and_star_plus_path() {
        let c = Family::BinaryCaterpillar(4).generate().unwrap();
        assert_eq!(c.leaf_count(), 4);
        assert_eq!(c.internal_count(), 3);
        assert_eq!(Family::BinaryCaterpillar(1).generate().unwrap().vertex_count(), 1);
        let s = Family::StarPlusPath { leaves: 3, path: 4 }.generate().unwrap();
        assert_eq!(s.leaf_count(), 4);
        assert_eq!(s.height(), 4);
    }

    #[test]
    fn invalid_parameters() {
        assert!(Family::Star(0).generate().is_err());
        assert!(Family::CompleteDary { arity: 1, height: 2 }.generate().is_err());
        assert!(Family::StarPlusPath { leaves: 2, path: 0 }.generate().is_err());
        assert!("nope:1".parse::<Family>().is_err());
        assert!("broom:1".parse::<Family>().is_err());
    }

    #[test]
    fn spec_grammar_round_trips() {
        for s in ["star:4", "broom:2,3", "dary:3,2", "greedy:5,5,3,1,1", "binary-caterpillar:6", "star-plus-path:2,3", "path-broom:3,2"] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let f = Family::GreedyCaterpillar(vec![2, 4, 3, 1]);
        assert_eq!(f.generate().unwrap().parents(), f.generate().unwrap().parents());
    }

    #[test]
    fn random_trees_are_preorder() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t = random_tree_max_leaves(&mut rng, 8);
            assert!(t.leaf_count() <= 8);
            assert_eq!(t.to_preorder(), t);
        }
    }
}
