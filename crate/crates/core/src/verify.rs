//! Exhaustive checks of every identity, bound and extremality theorem over
//! all trees up to a leaf count. Each suite yields one verdict line.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::bounds::{bound_report, complete_arity, q_recursion_check};
use crate::caterpillar::{
    asymptotic_radius, caterpillar_charpoly, chebyshev_form_check, trig_spectral_radius, ASYMPTOTIC_SLACK,
};
use crate::collections::{count_collections, search_space, DEFAULT_BUDGET};
use crate::enumeration::{
    claimed_maximizer, leaf_bounded_corpus, verify_extremal_over, Check, EnumerationError, ShapeTable, TreeClass,
    DEFAULT_CAP,
};
use crate::exact::{char_poly, dary_determinant_check, gamma_coefficients};
use crate::families::Family;
use crate::matrices::{ancestral_matrix, gram_check};
use crate::newick::{parse_newick, serialize_newick};
use crate::ops::{check_monotonicity, valid_specs, OpKind};
use crate::spectral::{eigenvalue_one_certificate, spectral_radius, spectrum, CLUSTER_WINDOW, DEFAULT_TOL};
use crate::tree::RootedTree;

/// Tolerance for comparing spectral radii across trees.
pub const EXTREMAL_TOL: f64 = 1e-7;
/// Tolerance for closed-form spectral radius values.
pub const VALUE_TOL: f64 = 1e-6;
/// Allowed decrease of the spectral radius across a transform.
pub const STRICT_TOL: f64 = 1e-9;
/// Coefficient-theorem corpus height limit.
pub const COLLECTION_MAX_HEIGHT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Newick or parameter description of the first failing case.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} checked={} failures={}", self.name, self.checked, self.failures)?;
        if let Some(c) = &self.first_failure {
            write!(f, " first={c}")?;
        }
        Ok(())
    }
}

/// Runs `check` on every case in order; the first failing label is kept.
fn suite<T: Sync>(name: &'static str, cases: &[T], label: impl Fn(&T) -> String + Sync, check: impl Fn(&T) -> bool + Sync) -> SuiteResult {
    let ok: Vec<bool> = cases.par_iter().map(&check).collect();
    let first_failure = ok.iter().position(|&b| !b).map(|i| label(&cases[i]));
    SuiteResult { name, checked: cases.len(), failures: ok.iter().filter(|&&b| !b).count(), first_failure }
}

fn newick(t: &RootedTree) -> String {
    serialize_newick(t)
}

pub fn eigenvalue_one_holds(t: &RootedTree) -> bool {
    let Ok(cert) = eigenvalue_one_certificate(t) else { return false };
    let c = ancestral_matrix(t);
    let Ok(s) = spectrum(t, DEFAULT_TOL) else { return false };
    cert.verify(&c) && s.count_near(1.0, CLUSTER_WINDOW) == cert.multiplicity
}

/// All bounds of the bound report plus the equality characterization of the
/// `(L−1)/(Δ−1)` bound.
pub fn bounds_hold(t: &RootedTree) -> bool {
    if t.vertex_count() == 1 {
        return true;
    }
    let Ok(r) = bound_report(t) else { return false };
    let equal = r
        .delta_bound
        .as_ref()
        .map(|b| (r.rho - *b.numer() as f64 / *b.denom() as f64).abs() <= VALUE_TOL);
    let equality_ok = match equal {
        Some(e) => e == complete_arity(t).is_some(),
        None => true,
    };
    r.all_satisfied && equality_ok
}

pub fn trace_holds(t: &RootedTree) -> bool {
    let g = gamma_coefficients(t);
    g.get(1).map_or(t.leaf_count() == 0, |g1| *g1 == BigInt::from(t.root_distance_sum()))
}

pub fn coefficient_theorem_holds(t: &RootedTree, budget: u64) -> bool {
    let Ok(c) = count_collections(t, budget) else { return false };
    let gamma = gamma_coefficients(t);
    let n = t.leaf_count();
    let sign = if n.is_multiple_of(2) { BigInt::from(1) } else { BigInt::from(-1) };
    c.counts.iter().map(|&x| BigInt::from(x)).eq(gamma)
        && BigInt::from(c.total) == sign * char_poly(t).eval(&BigInt::from(-1))
}

pub fn round_trip_holds(t: &RootedTree) -> bool {
    parse_newick(&serialize_newick(t)).is_ok_and(|u| u.parents() == t.parents())
}

/// 20 rational sample points avoiding the poles 1 and 3/2.
pub fn chebyshev_sample_points() -> Vec<BigRational> {
    (0..)
        .map(|i: i64| BigRational::new(BigInt::from(i - 9), BigInt::from(4)))
        .filter(|x| *x != BigRational::from_integer(1.into()) && *x != BigRational::new(3.into(), 2.into()))
        .take(20)
        .collect()
}

/// Verdicts of every suite for trees with at most `max_leaves` leaves.
pub fn verify_all(max_leaves: usize) -> Result<Vec<SuiteResult>, EnumerationError> {
    let k = max_leaves.max(2);
    let corpus = leaf_bounded_corpus(k)?;
    let nontrivial: Vec<RootedTree> = corpus.iter().filter(|t| t.vertex_count() > 1).cloned().collect();
    let mut out = vec![
        suite("gram-identity", &corpus, newick, gram_check),
        suite("eigenvalue-one", &nontrivial, newick, eigenvalue_one_holds),
        suite("spectral-bounds", &nontrivial, newick, bounds_hold),
        suite("q-recursion", &corpus, newick, q_recursion_check),
        suite("trace-gamma1", &corpus, newick, trace_holds),
    ];

    let small: Vec<RootedTree> = corpus
        .iter()
        .filter(|t| t.height() <= COLLECTION_MAX_HEIGHT && search_space(t) <= DEFAULT_BUDGET as u128)
        .cloned()
        .collect();
    out.push(suite("coefficient-theorem", &small, newick, |t| coefficient_theorem_holds(t, DEFAULT_BUDGET)));

    let mut dary = Vec::new();
    for d in [2usize, 3] {
        for l in 1..=k {
            for s in TreeClass::DaryByLeaves(d, l).shapes(DEFAULT_CAP)? {
                dary.push((d, RootedTree::from_shape(&s)));
            }
        }
    }
    out.push(suite(
        "dary-determinant",
        &dary,
        |(d, t)| format!("d={d} {}", newick(t)),
        |(d, t)| {
            let det = dary_determinant_check(t, *d).is_ok_and(|c| c.equal);
            let paths = *d != 2
                || count_collections(t, DEFAULT_BUDGET).is_ok_and(|c| c.total == 4u64.pow(t.leaf_count() as u32 - 1));
            det && paths
        },
    ));

    let table = ShapeTable::build(k + 1, |_| true, DEFAULT_CAP)?;
    let pairs: Vec<(usize, usize)> = (3..=k + 1).flat_map(|n| (2..n.min(k + 1)).map(move |l| (n, l))).collect();
    out.push(suite(
        "broom-theorem",
        &pairs,
        |(n, l)| format!("N={n} n={l}"),
        |&(n, l)| {
            let trees: Vec<RootedTree> = table.get(n, l).iter().map(RootedTree::from_shape).collect();
            let class = TreeClass::ByVerticesAndLeaves(n, l);
            let Ok(broom) = claimed_maximizer(&class, Check::Broom) else { return false };
            verify_extremal_over(&trees, &broom, EXTREMAL_TOL).is_ok_and(|r| {
                r.holds && (r.rho_max - (l * (n - l - 1) + 1) as f64).abs() <= VALUE_TOL
            })
        },
    ));

    let mut groups: BTreeMap<Vec<usize>, Vec<RootedTree>> = BTreeMap::new();
    for t in &corpus {
        groups.entry(t.outdegree_sequence()).or_default().push(t.clone());
    }
    let groups: Vec<(Vec<usize>, Vec<RootedTree>)> = groups.into_iter().collect();
    out.push(suite(
        "greedy-caterpillar-theorem",
        &groups,
        |(s, _)| format!("{s:?}"),
        |(s, trees)| {
            let class = TreeClass::ByOutdegreeSequence(s.clone());
            let Ok(greedy) = claimed_maximizer(&class, Check::Greedy) else { return false };
            verify_extremal_over(trees, &greedy, EXTREMAL_TOL).is_ok_and(|r| r.holds)
        },
    ));

    let sizes: Vec<usize> = (2..=k).collect();
    out.push(suite(
        "series-reduced-theorem",
        &sizes,
        |n| format!("n={n}"),
        |&n| {
            let class = TreeClass::SeriesReduced(n);
            let trees: Vec<RootedTree> = corpus
                .iter()
                .filter(|t| t.leaf_count() == n && (0..t.vertex_count()).all(|v| t.outdegree(v) != 1))
                .cloned()
                .collect();
            let Ok(cat) = claimed_maximizer(&class, Check::BinaryCaterpillar) else { return false };
            verify_extremal_over(&trees, &cat, EXTREMAL_TOL).is_ok_and(|r| r.holds)
        },
    ));

    let cat_sizes: Vec<usize> = (1..=k.max(12)).collect();
    let points = chebyshev_sample_points();
    out.push(suite(
        "caterpillar-recursion",
        &cat_sizes,
        |n| format!("n={n}"),
        |&n| {
            let tree = Family::BinaryCaterpillar(n).generate().expect("n >= 1");
            let rec = caterpillar_charpoly(n).is_ok_and(|p| p == char_poly(&tree));
            let closed = !(2..=8).contains(&n) || points.iter().all(|x| chebyshev_form_check(n, x).unwrap_or(false));
            rec && closed
        },
    ));

    let trig_sizes: Vec<usize> = (3..=30).collect();
    out.push(suite(
        "trig-root",
        &trig_sizes,
        |n| format!("n={n}"),
        |&n| {
            let tree = Family::BinaryCaterpillar(n).generate().expect("n >= 1");
            let Ok(num) = spectral_radius(&tree, DEFAULT_TOL) else { return false };
            trig_spectral_radius(n, 1e-13).is_ok_and(|r| (r.rho - num.rho).abs() <= VALUE_TOL * num.rho)
        },
    ));

    let asym_sizes: Vec<usize> = (10..=200).collect();
    out.push(suite(
        "asymptotic-radius",
        &asym_sizes,
        |n| format!("n={n}"),
        |&n| trig_spectral_radius(n, 1e-13).is_ok_and(|r| (r.rho - asymptotic_radius(n)).abs() <= ASYMPTOTIC_SLACK),
    ));

    for (name, kind) in [
        ("branch-shift", OpKind::BranchShift),
        ("star-shift", OpKind::StarShift),
        ("leaf-swap", OpKind::LeafSwap),
    ] {
        let cases: Vec<(RootedTree, crate::ops::OpSpec)> = corpus
            .iter()
            .flat_map(|t| valid_specs(t, kind).into_iter().map(move |s| (t.clone(), s)))
            .collect();
        out.push(suite(
            name,
            &cases,
            |(t, s)| format!("{} {s:?}", newick(t)),
            |(t, s)| check_monotonicity(t, s, DEFAULT_TOL).is_ok_and(|(_, m)| m.consistent(STRICT_TOL)),
        ));
    }

    out.push(suite("newick-round-trip", &corpus, newick, round_trip_holds));
    Ok(out)
}
