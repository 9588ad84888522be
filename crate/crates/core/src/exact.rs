//! Exact characteristic polynomials and determinants over big integers.
//!
//! `Γ_T(x) = det(xI - C(T))` is computed by evaluating the determinant at the
//! integer points `0..=n` with fraction-free (Bareiss) elimination and
//! interpolating in the Newton basis. Faddeev–LeVerrier gives an independent
//! second route used for cross-checking.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::matrices::{ancestral_matrix, AncestralMatrix};
use crate::tree::{RootedTree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("vertex {vertex} has {outdegree} children, expected 0 or {arity}")]
    NotDary { vertex: Vertex, outdegree: usize, arity: usize },
    #[error("arity must be at least 2")]
    BadArity,
}

/// Integer polynomial, coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: i64) -> Self {
        IntPolynomial::from_i64(&[c])
    }

    /// `x - a`
    pub fn linear(a: i64) -> Self {
        IntPolynomial::from_i64(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(IntPolynomial::constant(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + bigint_to_f64(c))
    }

    /// `Σ |c_i| |x|^i`, the natural scale for judging `|p(x)|`.
    pub fn abs_scale(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x.abs() + bigint_to_f64(c).abs())
    }

    /// `γ_k = (-1)^k [x^{n-k}]`, for `k = 0..=n`.
    pub fn gamma(&self) -> Vec<BigInt> {
        let n = self.degree();
        (0..=n)
            .map(|k| {
                let c = &self.coeffs[n - k];
                if k % 2 == 0 {
                    c.clone()
                } else {
                    -c
                }
            })
            .collect()
    }

    /// Space-separated coefficients, highest degree first.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().rev().map(BigInt::to_string).collect();
        parts.join(" ")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    // desk-scale values; the decimal round trip is exact enough and total
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// Determinant by fraction-free Gaussian elimination with row pivoting.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `det(x I - C)` at an integer point `x`.
pub fn char_det_at(c: &AncestralMatrix, x: i64) -> BigInt {
    let n = c.size();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = -(c.get(i, j) as i64) + if i == j { x } else { 0 };
                    BigInt::from(v)
                })
                .collect()
        })
        .collect();
    bareiss_determinant(rows)
}

/// Characteristic polynomial by evaluation at `0..=n` and Newton interpolation.
pub fn char_poly_of(c: &AncestralMatrix) -> IntPolynomial {
    let n = c.size();
    let values: Vec<BigInt> = (0..=n as i64).into_par_iter().map(|x| char_det_at(c, x)).collect();

    // Newton coefficients Δ^k f(0) / k!, exact for integer polynomials
    let mut diffs = values;
    let mut newton = Vec::with_capacity(n + 1);
    let mut factorial = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            factorial *= k;
        }
        let (q, r) = diffs[0].div_rem(&factorial);
        debug_assert!(r.is_zero(), "forward difference not divisible by k!");
        newton.push(q);
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }

    let mut poly = IntPolynomial::new(vec![newton[n].clone()]);
    for k in (0..n).rev() {
        poly = &(&poly * &IntPolynomial::linear(k as i64)) + &IntPolynomial::new(vec![newton[k].clone()]);
    }
    poly
}

/// Characteristic polynomial by the Faddeev–LeVerrier recursion.
///
/// With `M_0 = 0`, `M_k = C M_{k-1} + c_{n-k+1} I` and
/// `c_{n-k} = -tr(C M_k) / k`; every division is exact for integer `C`.
pub fn faddeev_leverrier(c: &AncestralMatrix) -> IntPolynomial {
    let n = c.size();
    let a: Vec<Vec<BigInt>> = c.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = matmul(&a, &m);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = q;
    }
    IntPolynomial::new(coeffs)
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

pub fn char_poly(tree: &RootedTree) -> IntPolynomial {
    char_poly_of(&ancestral_matrix(tree))
}

/// `γ_0..γ_n` of `Γ_T`.
pub fn gamma_coefficients(tree: &RootedTree) -> Vec<BigInt> {
    char_poly(tree).gamma()
}

/// `det(cI + C(T))` exactly, for rational `c = p/q`: `det(pI + qC) / q^n`.
pub fn eval_det_shift(tree: &RootedTree, c: &BigRational) -> BigRational {
    det_shift_of(&ancestral_matrix(tree), c)
}

pub fn det_shift_of(m: &AncestralMatrix, c: &BigRational) -> BigRational {
    let n = m.size();
    let (p, q) = (c.numer(), c.denom());
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = q * BigInt::from(m.get(i, j));
                    if i == j {
                        v += p;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let det = bareiss_determinant(rows);
    BigRational::new(det, q.pow(n as u32))
}

/// Outcome of comparing `det(I + (d-1)C(T))` with `d^{d·int(T)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaryCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub equal: bool,
}

/// Returns the first internal vertex whose outdegree is not `d`.
pub fn first_non_dary_vertex(tree: &RootedTree, d: usize) -> Option<Vertex> {
    (0..tree.vertex_count()).find(|&v| !tree.is_leaf(v) && tree.outdegree(v) != d)
}

pub fn dary_determinant_check(tree: &RootedTree, d: usize) -> Result<DaryCheck, ExactError> {
    if d < 2 {
        return Err(ExactError::BadArity);
    }
    if let Some(v) = first_non_dary_vertex(tree, d) {
        return Err(ExactError::NotDary { vertex: v, outdegree: tree.outdegree(v), arity: d });
    }
    let c = ancestral_matrix(tree);
    let n = c.size();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = (d as u64 - 1) * c.get(i, j) + u64::from(i == j);
                    BigInt::from(v)
                })
                .collect()
        })
        .collect();
    let lhs = bareiss_determinant(rows);
    let rhs = BigInt::from(d).pow((d * tree.internal_count()) as u32);
    let equal = lhs == rhs;
    Ok(DaryCheck { lhs, rhs, equal })
}

/// True when every coefficient is non-negative.
pub fn all_non_negative(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
