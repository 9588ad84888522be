//! Numeric spectrum of the ancestral matrix.
//!
//! The eigensolver is cyclic Jacobi: unconditionally convergent for real
//! symmetric matrices and plenty fast at the sizes used here.

use thiserror::Error;

use crate::matrices::{ancestral_matrix, branch_blocks, AncestralMatrix};
use crate::tree::{RootedTree, Vertex};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SWEEPS: usize = 100;
/// Absolute window used when counting eigenvalues equal to a target.
pub const CLUSTER_WINDOW: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("Jacobi iteration did not reach the residual target after {0} sweeps")]
    NoConvergence(usize),
    #[error("the single-vertex tree has no eigenvalue-1 structure")]
    SingleVertexTree,
    #[error("eigenvalue-1 certificate failed exact verification")]
    CertificateFailed,
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` belongs to `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `max_i ‖M x_i − λ_i x_i‖₂`
    pub residual: f64,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Number of eigenvalues within `window` of `target`.
    pub fn count_near(&self, target: f64, window: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| (l - target).abs() <= window).count()
    }
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Succeeds when the residual is at most `tol · max(1, ‖A‖_F)`.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigen(a: &[Vec<f64>], tol: f64, max_sweeps: usize) -> Result<Spectrum, SpectralError> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let norm = frobenius(a);
    let target = tol * norm.max(1.0);

    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * norm.max(f64::MIN_POSITIVE) || sweeps == max_sweeps {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← Jᵗ A J on rows/columns p, q
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].total_cmp(&m[i][i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    let residual = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&l, x)| {
            (0..n)
                .map(|i| {
                    let ax: f64 = (0..n).map(|j| a[i][j] * x[j]).sum();
                    (ax - l * x[i]).powi(2)
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    if residual > target {
        return Err(SpectralError::NoConvergence(sweeps));
    }
    Ok(Spectrum { eigenvalues, eigenvectors, residual })
}

pub fn eigen_decompose(m: &AncestralMatrix, tol: f64) -> Result<Spectrum, SpectralError> {
    jacobi_eigen(&m.to_f64_rows(), tol, DEFAULT_SWEEPS)
}

pub fn spectrum(tree: &RootedTree, tol: f64) -> Result<Spectrum, SpectralError> {
    eigen_decompose(&ancestral_matrix(tree), tol)
}

/// Largest eigenvalue and a non-negative unit eigenvector for it.
#[derive(Debug, Clone)]
pub struct SpectralRadius {
    pub rho: f64,
    /// Indexed by leaf position; zero outside the winning branch.
    pub perron: Vec<f64>,
    /// Index of the winning root branch, `None` for the single-vertex tree.
    pub branch: Option<usize>,
    /// Largest eigenvalue of each root branch block.
    pub branch_radii: Vec<f64>,
    /// Unit top eigenvector of each branch block, zero-padded to leaf length.
    pub branch_vectors: Vec<Vec<f64>>,
}

impl SpectralRadius {
    /// A Perron vector with the largest support: the normalized sum of the top
    /// vectors of every branch whose radius ties with `rho`.
    pub fn widest_perron(&self) -> Vec<f64> {
        let n = self.perron.len();
        let mut sum = vec![0.0; n];
        for (r, v) in self.branch_radii.iter().zip(&self.branch_vectors) {
            if (r - self.rho).abs() <= TIE_WINDOW * self.rho.max(1.0) {
                sum.iter_mut().zip(v).for_each(|(s, e)| *s += e);
            }
        }
        let norm = sum.iter().map(|e| e * e).sum::<f64>().sqrt();
        if norm == 0.0 {
            return self.perron.clone();
        }
        sum.iter().map(|e| e / norm).collect()
    }
}

/// Relative window within which two branch radii count as tied.
pub const TIE_WINDOW: f64 = 1e-9;

/// Spectral radius computed block by block over the root branches.
///
/// When several branches tie, the Perron vector of the first one (in leaf
/// order) is returned; the Perron vector is then not unique.
pub fn spectral_radius(tree: &RootedTree, tol: f64) -> Result<SpectralRadius, SpectralError> {
    let c = ancestral_matrix(tree);
    spectral_radius_of(&c, &branch_blocks(tree), tol)
}

pub fn spectral_radius_of(c: &AncestralMatrix, blocks: &[Vec<usize>], tol: f64) -> Result<SpectralRadius, SpectralError> {
    let n = c.size();
    if blocks.is_empty() {
        return Ok(SpectralRadius {
            rho: 0.0,
            perron: vec![1.0; n],
            branch: None,
            branch_radii: vec![],
            branch_vectors: vec![],
        });
    }
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    let mut radii = Vec::with_capacity(blocks.len());
    let mut vectors = Vec::with_capacity(blocks.len());
    for (b, idx) in blocks.iter().enumerate() {
        let s = eigen_decompose(&c.submatrix(idx), tol)?;
        let rho = s.max();
        let mut x = s.eigenvectors[0].clone();
        if x.iter().sum::<f64>() < 0.0 {
            x.iter_mut().for_each(|e| *e = -*e);
        }
        let mut full = vec![0.0; n];
        for (&i, &e) in idx.iter().zip(&x) {
            full[i] = e;
        }
        let better = match &best {
            None => true,
            Some((_, r, _)) => rho > r + TIE_WINDOW * r.max(1.0),
        };
        if better {
            best = Some((b, rho, full.clone()));
        }
        radii.push(rho);
        vectors.push(full);
    }
    let (b, rho, perron) = best.expect("at least one branch");
    Ok(SpectralRadius { rho, perron, branch: Some(b), branch_radii: radii, branch_vectors: vectors })
}

/// Integer eigenvectors for eigenvalue 1, built from sibling leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenOneCertificate {
    pub multiplicity: usize,
    pub basis: Vec<Vec<i64>>,
}

impl EigenOneCertificate {
    /// Exact check: `C b = b` for every basis vector, the vectors are
    /// independent and there are `multiplicity` of them.
    pub fn verify(&self, c: &AncestralMatrix) -> bool {
        self.basis.len() == self.multiplicity
            && self.basis.iter().all(|b| c.mul_vec(b) == *b)
            && integer_rank(&self.basis) == self.basis.len()
    }
}

#[allow(clippy::needless_range_loop)]
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][col] != 0 {
                let (a, b) = (m[rank][col], m[i][col]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[rank][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of non-root vertices with at least one leaf child.
pub fn non_root_leaf_parents(tree: &RootedTree) -> usize {
    let mut parents: Vec<Vertex> = tree
        .leaves()
        .iter()
        .filter_map(|&v| tree.parent(v))
        .filter(|&p| p != tree.root())
        .collect();
    parents.sort_unstable();
    parents.dedup();
    parents.len()
}

/// Eigenvalue-1 multiplicity and basis from the sibling-leaf recipe.
///
/// For each maximal group `w_1..w_r` of leaves with a common parent the
/// vectors `e_{w_1} − e_{w_j}` are taken; if some leaf hangs directly off
/// the root, one unit vector for such a leaf is added.
pub fn eigenvalue_one_certificate(tree: &RootedTree) -> Result<EigenOneCertificate, SpectralError> {
    if tree.vertex_count() == 1 {
        return Err(SpectralError::SingleVertexTree);
    }
    let n = tree.leaf_count();
    let multiplicity = n - non_root_leaf_parents(tree);
    let mut basis = Vec::new();
    for v in 0..tree.vertex_count() {
        let group: Vec<usize> = tree
            .children(v)
            .iter()
            .filter(|&&c| tree.is_leaf(c))
            .map(|&c| tree.leaf_position(c).expect("leaf"))
            .collect();
        let Some((&first, rest)) = group.split_first() else {
            continue;
        };
        for &other in rest {
            let mut b = vec![0i64; n];
            b[first] = 1;
            b[other] = -1;
            basis.push(b);
        }
        if v == tree.root() {
            let mut b = vec![0i64; n];
            b[first] = 1;
            basis.push(b);
        }
    }
    let cert = EigenOneCertificate { multiplicity, basis };
    if !cert.verify(&ancestral_matrix(tree)) {
        return Err(SpectralError::CertificateFailed);
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{random_tree_max_leaves, Family};
    use crate::newick::parse_newick;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sample_tree_eigenvalues() {
        let t = parse_newick("((,),(,,(,)));").unwrap();
        let s = spectrum(&t, DEFAULT_TOL).unwrap();
        let r5 = 5f64.sqrt();
        let expected = [4.0 + r5, 3.0, 4.0 - r5, 1.0, 1.0, 1.0];
        for (a, b) in s.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!((s.sum() - 14.0).abs() < 1e-10);
        let cert = eigenvalue_one_certificate(&t).unwrap();
        assert_eq!(cert.multiplicity, 3);
        assert_eq!(s.count_near(1.0, CLUSTER_WINDOW), 3);
    }

    #[test]
    fn identity_and_broom() {
        let star = Family::Star(4).generate().unwrap();
        let s = spectrum(&star, DEFAULT_TOL).unwrap();
        assert!(s.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-12));
        let broom = Family::Broom { path: 2, leaves: 3 }.generate().unwrap();
        let s = spectrum(&broom, DEFAULT_TOL).unwrap();
        assert!((s.eigenvalues[0] - 7.0).abs() < 1e-10);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-10);
        assert!((s.eigenvalues[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let t = Family::BinaryCaterpillar(7).generate().unwrap();
        let s = spectrum(&t, DEFAULT_TOL).unwrap();
        for (i, x) in s.eigenvectors.iter().enumerate() {
            for (j, y) in s.eigenvectors.iter().enumerate() {
                let d: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn spectral_radius_examples() {
        for n in 1..6 {
            let r = spectral_radius(&Family::Star(n).generate().unwrap(), DEFAULT_TOL).unwrap();
            assert!((r.rho - 1.0).abs() < 1e-12);
        }
        for h in 1..6 {
            let t = Family::StarPlusPath { leaves: 3, path: h }.generate().unwrap();
            let r = spectral_radius(&t, DEFAULT_TOL).unwrap();
            assert!((r.rho - h as f64).abs() < 1e-10);
        }
        let c3 = Family::BinaryCaterpillar(3).generate().unwrap();
        let r = spectral_radius(&c3, DEFAULT_TOL).unwrap();
        assert!((r.rho - 3.0).abs() < 1e-10);
        assert!(r.perron.iter().all(|&x| x >= -1e-12));
        let norm: f64 = r.perron.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // the leaf next to the root is in the losing branch
        assert_eq!(r.perron[0], 0.0);

        let single = spectral_radius(&RootedTree::single_vertex(), DEFAULT_TOL).unwrap();
        assert_eq!(single.rho, 0.0);
    }

    #[test]
    fn tie_picks_first_branch() {
        let t = parse_newick("((,),(,));").unwrap();
        let r = spectral_radius(&t, DEFAULT_TOL).unwrap();
        assert_eq!(r.branch, Some(0));
        assert!(r.perron[2] == 0.0 && r.perron[3] == 0.0);
    }

    #[test]
    fn certificate_examples() {
        let star = Family::Star(5).generate().unwrap();
        assert_eq!(eigenvalue_one_certificate(&star).unwrap().multiplicity, 5);
        let d22 = Family::CompleteDary { arity: 2, height: 2 }.generate().unwrap();
        let cert = eigenvalue_one_certificate(&d22).unwrap();
        assert_eq!(cert.multiplicity, 2);
        assert_eq!(spectrum(&d22, DEFAULT_TOL).unwrap().count_near(1.0, 1e-9), 2);
        assert_eq!(
            eigenvalue_one_certificate(&RootedTree::single_vertex()),
            Err(SpectralError::SingleVertexTree)
        );
    }

    #[test]
    fn random_trees_block_spectrum_and_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let t = random_tree_max_leaves(&mut rng, 10);
            if t.vertex_count() == 1 {
                continue;
            }
            let c = ancestral_matrix(&t);
            let s = eigen_decompose(&c, DEFAULT_TOL).unwrap();
            assert!(s.min() >= 1.0 - 1e-8);
            let d = t.root_distance_sum() as f64;
            assert!((s.sum() - d).abs() <= 1e-8 * d);
            let cert = eigenvalue_one_certificate(&t).unwrap();
            assert_eq!(cert.multiplicity, s.count_near(1.0, CLUSTER_WINDOW));

            // union of branch block spectra
            let mut merged: Vec<f64> = branch_blocks(&t)
                .iter()
                .flat_map(|idx| eigen_decompose(&c.submatrix(idx), DEFAULT_TOL).unwrap().eigenvalues)
                .collect();
            merged.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in merged.iter().zip(&s.eigenvalues) {
                assert!((a - b).abs() < 1e-8);
            }
            let r = spectral_radius(&t, DEFAULT_TOL).unwrap();
            assert!((r.rho - s.max()).abs() < 1e-8);
            let mult = s.count_near(s.max(), CLUSTER_WINDOW);
            assert!(mult <= t.outdegree(t.root()));
        }
    }

    #[test]
    fn no_convergence_with_zero_sweeps() {
        let c = ancestral_matrix(&parse_newick("((,),(,,(,)));").unwrap());
        assert!(matches!(jacobi_eigen(&c.to_f64_rows(), 1e-10, 0), Err(SpectralError::NoConvergence(0))));
    }
}
