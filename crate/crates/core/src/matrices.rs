//! The ancestral matrix and the path-incidence matrix of a rooted tree.

use std::fmt;

use crate::tree::{RootedTree, Vertex};

/// Leaf-indexed matrix of ancestral levels. Row/column order is
/// [`RootedTree::leaves`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestralMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl AncestralMatrix {
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        AncestralMatrix { n, entries: rows.concat() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Sum of all entries.
    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Each diagonal entry is strictly larger than every other entry in its row.
    pub fn diagonal_dominates_rows(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) < self.get(i, i)))
    }

    /// Principal submatrix on the given row indices.
    pub fn submatrix(&self, idx: &[usize]) -> AncestralMatrix {
        let rows: Vec<Vec<u64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        AncestralMatrix::from_rows(&rows)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|&x| x as f64).collect())
            .collect()
    }

    /// `C x` over integers.
    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&c, &v)| c as i64 * v).sum())
            .collect()
    }

    /// `{"n":…,"rows":[[…]]}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "rows": self.rows() })
    }
}

impl fmt::Display for AncestralMatrix {
    /// One row per line, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Leaf-by-edge 0/1 matrix; edge `j` is the edge above vertex `edge_order[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathIncidenceMatrix {
    pub rows: Vec<Vec<u8>>,
    pub edge_order: Vec<Vertex>,
}

impl PathIncidenceMatrix {
    pub fn leaf_count(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_order.len()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.iter().map(|&a| a as u64).sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.edge_count())
            .map(|j| self.rows.iter().map(|r| r[j] as u64).sum())
            .collect()
    }

    /// `I_p I_pᵗ`.
    pub fn gram(&self) -> AncestralMatrix {
        let n = self.rows.len();
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.rows[i]
                            .iter()
                            .zip(&self.rows[j])
                            .map(|(&a, &b)| (a * b) as u64)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        AncestralMatrix::from_rows(&rows)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.rows.len(),
            "m": self.edge_order.len(),
            "rows": self.rows,
        })
    }
}

impl fmt::Display for PathIncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let row: Vec<String> = r.iter().map(u8::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn ancestral_matrix(tree: &RootedTree) -> AncestralMatrix {
    let leaves = tree.leaves();
    let rows: Vec<Vec<u64>> = leaves
        .iter()
        .map(|&u| {
            leaves
                .iter()
                .map(|&v| tree.ancestral_level(u, v).expect("leaves are vertices") as u64)
                .collect()
        })
        .collect();
    AncestralMatrix::from_rows(&rows)
}

pub fn path_incidence_matrix(tree: &RootedTree) -> PathIncidenceMatrix {
    let edge_order = tree.edges();
    let rows = tree
        .leaves()
        .iter()
        .map(|&leaf| edge_order.iter().map(|&e| tree.is_ancestor(e, leaf) as u8).collect())
        .collect();
    PathIncidenceMatrix { rows, edge_order }
}

/// Checks `C(T) = I_p(T) I_p(T)ᵗ` exactly.
///
/// The single-vertex tree has a 1×0 incidence matrix whose Gram product is
/// the 1×1 zero matrix.
pub fn gram_check(tree: &RootedTree) -> bool {
    path_incidence_matrix(tree).gram() == ancestral_matrix(tree)
}

/// Leaf positions grouped by root branch, in branch order.
pub fn branch_blocks(tree: &RootedTree) -> Vec<Vec<usize>> {
    tree.children(tree.root())
        .iter()
        .map(|&b| {
            tree.leaves_below(b)
                .into_iter()
                .map(|v| tree.leaf_position(v).expect("leaf"))
                .collect()
        })
        .collect()
}

/// Rebuilds `C(T)` from the matrices of its root branches: leaves in
/// different branches get 0, leaves in branch `j` get `C(T_j) + 1`.
pub fn from_branch_blocks(tree: &RootedTree) -> AncestralMatrix {
    let n = tree.leaf_count();
    if tree.children(tree.root()).is_empty() {
        return AncestralMatrix::from_rows(&[vec![0]]);
    }
    let mut rows = vec![vec![0u64; n]; n];
    for &b in tree.children(tree.root()) {
        let (sub, orig) = tree.subtree_with_map(b);
        let block = ancestral_matrix(&sub);
        let pos: Vec<usize> = sub
            .leaves()
            .iter()
            .map(|&v| tree.leaf_position(orig[v]).expect("leaf"))
            .collect();
        for (a, &i) in pos.iter().enumerate() {
            for (c, &j) in pos.iter().enumerate() {
                rows[i][j] = block.get(a, c) + 1;
            }
        }
    }
    AncestralMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{random_tree_max_leaves, Family};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_tree() -> RootedTree {
        RootedTree::from_parents(&[None, Some(2), Some(0), Some(2), Some(0), Some(4), Some(4), Some(4), Some(7), Some(7)])
            .unwrap()
    }

    #[test]
    fn sample_tree_matrix() {
        let c = ancestral_matrix(&sample_tree());
        let expected = "2 1 0 0 0 0\n1 2 0 0 0 0\n0 0 2 1 1 1\n0 0 1 2 1 1\n0 0 1 1 3 2\n0 0 1 1 2 3\n";
        assert_eq!(c.to_string(), expected);
        assert!(c.is_symmetric());
        assert!(c.diagonal_dominates_rows());
        assert_eq!(c.total(), 30);
    }

    #[test]
    fn sample_tree_incidence() {
        let p = path_incidence_matrix(&sample_tree());
        let expected = "\
1 1 0 0 0 0 0 0 0
0 1 1 0 0 0 0 0 0
0 0 0 1 1 0 0 0 0
0 0 0 1 0 1 0 0 0
0 0 0 1 0 0 1 1 0
0 0 0 1 0 0 1 0 1
";
        assert_eq!(p.to_string(), expected);
        assert_eq!(p.row_sums(), vec![2, 2, 2, 2, 3, 3]);
        assert_eq!(p.column_sums(), vec![1, 2, 1, 4, 1, 1, 2, 1, 1]);
        assert!(gram_check(&sample_tree()));
    }

    #[test]
    fn trivial_trees() {
        let single = RootedTree::single_vertex();
        assert_eq!(ancestral_matrix(&single).rows(), vec![vec![0]]);
        let p = path_incidence_matrix(&single);
        assert_eq!((p.leaf_count(), p.edge_count()), (1, 0));
        assert!(gram_check(&single));

        let star = Family::Star(3).generate().unwrap();
        assert_eq!(ancestral_matrix(&star).rows(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(path_incidence_matrix(&star).rows, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn json_form() {
        let c = ancestral_matrix(&Family::Star(2).generate().unwrap());
        assert_eq!(c.to_json().to_string(), r#"{"n":2,"rows":[[1,0],[0,1]]}"#);
    }

    #[test]
    fn random_trees_satisfy_gram_and_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let t = random_tree_max_leaves(&mut rng, 12);
            assert!(gram_check(&t));
            let c = ancestral_matrix(&t);
            assert_eq!(from_branch_blocks(&t), c);
            // xᵗCx = |I_pᵗx|² ≥ 0
            let p = path_incidence_matrix(&t);
            let x: Vec<i64> = (0..c.size()).map(|_| rng.gen_range(-5..=5)).collect();
            let quad: i64 = c.mul_vec(&x).iter().zip(&x).map(|(a, b)| a * b).sum();
            let proj: i64 = (0..p.edge_count())
                .map(|j| {
                    let s: i64 = (0..p.leaf_count()).map(|i| p.rows[i][j] as i64 * x[i]).sum();
                    s * s
                })
                .sum();
            assert_eq!(quad, proj);
            assert!(quad >= 0);
        }
    }

    #[test]
    fn blocks_split_by_branch() {
        let t = sample_tree();
        assert_eq!(branch_blocks(&t), vec![vec![0, 1], vec![2, 3, 4, 5]]);
    }
}
