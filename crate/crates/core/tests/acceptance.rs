//! Acceptance criteria, one verdict line each. Runs without the libtest
//! harness so the verdict lines are always printed.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use ancestral::bounds::{bound_report, complete_arity};
use ancestral::caterpillar::{asymptotic_radius, caterpillar_charpoly, chebyshev_form_check, trig_spectral_radius};
use ancestral::collections::count_collections;
use ancestral::enumeration::{
    leaf_bounded_corpus, verify_extremal, verify_extremal_over, ShapeTable, TreeClass, DEFAULT_CAP,
};
use ancestral::exact::{char_poly, dary_determinant_check, gamma_coefficients};
use ancestral::families::{random_tree_max_leaves, Family};
use ancestral::matrices::{ancestral_matrix, gram_check, path_incidence_matrix};
use ancestral::newick::{parse_newick, serialize_newick};
use ancestral::ops::{check_monotonicity, random_spec, OpKind};
use ancestral::spectral::{eigenvalue_one_certificate, spectral_radius, spectrum, DEFAULT_TOL};
use ancestral::tree::RootedTree;
use ancestral::verify::chebyshev_sample_points;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EIGEN_ABS_TOL: f64 = 1e-8;
const MULTIPLICITY_WINDOW: f64 = 1e-6;
const BOUND_TOL: f64 = 1e-7;
const EQUALITY_TOL: f64 = 1e-6;
const BROOM_TOL: f64 = 1e-6;
const GREEDY_TOL: f64 = 1e-7;
const SERIES_TOL: f64 = 1e-7;
const TRIG_REL_TOL: f64 = 1e-6;
const ASYMPTOTIC_SLACK: f64 = 3.0;
const COLLECTION_BUDGET: u64 = 10_000_000;
const MONOTONE_TOL: f64 = 1e-9;
const STRICT_MARGIN: f64 = 1e-9;
const OPS_SAMPLES: usize = 500;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Verdict + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sample_tree() -> RootedTree {
    RootedTree::from_parents(&[None, Some(2), Some(0), Some(2), Some(0), Some(4), Some(4), Some(4), Some(7), Some(7)])
        .expect("valid parent list")
}

fn corpus10() -> Vec<RootedTree> {
    leaf_bounded_corpus(10).expect("corpus fits the cap")
}

fn c01_sample_tree() -> Verdict {
    let t = sample_tree();
    let matrix = "2 1 0 0 0 0\n1 2 0 0 0 0\n0 0 2 1 1 1\n0 0 1 2 1 1\n0 0 1 1 3 2\n0 0 1 1 2 3\n";
    let incidence = "1 1 0 0 0 0 0 0 0\n0 1 1 0 0 0 0 0 0\n0 0 0 1 1 0 0 0 0\n\
                     0 0 0 1 0 1 0 0 0\n0 0 0 1 0 0 1 1 0\n0 0 0 1 0 0 1 0 1\n";
    ensure(ancestral_matrix(&t).to_string() == matrix, || "ancestral matrix differs".into())?;
    ensure(path_incidence_matrix(&t).to_string() == incidence, || "incidence matrix differs".into())?;
    let s5 = 5f64.sqrt();
    let expected = [4.0 + s5, 3.0, 4.0 - s5, 1.0, 1.0, 1.0];
    let got = spectrum(&t, DEFAULT_TOL).map_err(|e| e.to_string())?.eigenvalues;
    let err = got.iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= EIGEN_ABS_TOL, || format!("eigenvalue error {err:e}"))?;
    Ok(format!("matrices byte-equal, max eigenvalue error {err:.1e}"))
}

fn c02_gram(corpus: &[RootedTree]) -> Verdict {
    let bad = corpus.iter().filter(|t| !gram_check(t)).count();
    ensure(bad == 0, || format!("{bad} corpus failures"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random: Vec<RootedTree> = (0..500).map(|_| random_tree_max_leaves(&mut rng, 25)).collect();
    let bad = random.iter().filter(|t| !gram_check(t)).count();
    ensure(bad == 0, || format!("{bad} random failures"))?;
    Ok(format!("{} enumerated + 500 random trees", corpus.len()))
}

fn c03_eigen_one(corpus: &[RootedTree]) -> Verdict {
    let mut checked = 0;
    for t in corpus.iter().filter(|t| t.vertex_count() > 1) {
        let cert = eigenvalue_one_certificate(t).map_err(|e| e.to_string())?;
        let c = ancestral_matrix(t);
        let numeric = spectrum(t, DEFAULT_TOL).map_err(|e| e.to_string())?.count_near(1.0, MULTIPLICITY_WINDOW);
        ensure(cert.verify(&c) && numeric == cert.multiplicity, || {
            format!("{}: combinatorial {} vs numeric {numeric}", serialize_newick(t), cert.multiplicity)
        })?;
        checked += 1;
    }
    Ok(format!("{checked} trees"))
}

fn c04_bounds(corpus: &[RootedTree]) -> Verdict {
    let mut equality_cases = 0;
    for t in corpus.iter().filter(|t| t.vertex_count() > 1) {
        let r = bound_report(t).map_err(|e| e.to_string())?;
        ensure(r.checks.iter().all(|c| c.rho_ok(r.rho, BOUND_TOL)), || format!("{}: {:?}", serialize_newick(t), r.checks))?;
        if let Some(b) = r.delta_bound {
            let value = *b.numer() as f64 / *b.denom() as f64;
            let equal = (r.rho - value).abs() <= EQUALITY_TOL;
            ensure(equal == complete_arity(t).is_some(), || format!("{}: equality mismatch", serialize_newick(t)))?;
            equality_cases += equal as usize;
        }
    }
    Ok(format!("{} trees, {equality_cases} complete trees attain the degree bound", corpus.len() - 1))
}

trait RhoOk {
    fn rho_ok(&self, rho: f64, tol: f64) -> bool;
}

impl RhoOk for ancestral::bounds::BoundCheck {
    /// Re-derives the verdict from the bound value with this suite's tolerance.
    fn rho_ok(&self, rho: f64, tol: f64) -> bool {
        if self.name == "max_ad" {
            rho <= self.bound + tol
        } else {
            rho >= self.bound - tol
        }
    }
}

fn c05_broom() -> Verdict {
    let table = ShapeTable::build(10, |_| true, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    let mut unique = 0;
    for n in 3..=10usize {
        for l in 2..n {
            let trees: Vec<RootedTree> = table.get(n, l).iter().map(RootedTree::from_shape).collect();
            let broom = Family::Broom { path: n - l - 1, leaves: l }.generate().map_err(|e| e.to_string())?;
            let r = verify_extremal_over(&trees, &broom, BROOM_TOL).map_err(|e| e.to_string())?;
            let value = (l * (n - l - 1) + 1) as f64;
            ensure(r.holds && r.argmax.is_isomorphic(&broom) && (r.rho_max - value).abs() <= BROOM_TOL, || {
                format!("N={n} n={l}: rho_max {} argmax {}", r.rho_max, serialize_newick(&r.argmax))
            })?;
            unique += (r.ties.len() == 1) as usize;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (N,n) classes, broom is the unique maximizer in {unique}"))
}

/// Outdegree classes: every multiset realised by a tree with at most 14
/// vertices and 9 leaves, plus every multiset without outdegree 1 and at
/// most 9 leaves.
fn c06_greedy() -> Verdict {
    let mut groups: BTreeMap<Vec<usize>, Vec<RootedTree>> = BTreeMap::new();
    let table = ShapeTable::build(14, |_| true, DEFAULT_CAP).map_err(|e| e.to_string())?;
    for n in 1..=14 {
        for l in 1..=9.min(n) {
            for s in table.get(n, l) {
                let t = RootedTree::from_shape(s);
                groups.entry(t.outdegree_sequence()).or_default().push(t);
            }
        }
    }
    for l in 1..=9 {
        for s in TreeClass::SeriesReduced(l).shapes(DEFAULT_CAP).map_err(|e| e.to_string())? {
            let t = RootedTree::from_shape(&s);
            if t.vertex_count() > 14 {
                groups.entry(t.outdegree_sequence()).or_default().push(t);
            }
        }
    }
    let mut trees = 0;
    for (seq, members) in &groups {
        let greedy = Family::GreedyCaterpillar(seq.clone()).generate().map_err(|e| e.to_string())?;
        let r = verify_extremal_over(members, &greedy, GREEDY_TOL).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("{seq:?}: max {} at {}, greedy {}", r.rho_max, serialize_newick(&r.argmax), r.claimed_rho))?;
        trees += members.len();
    }
    Ok(format!("{} multisets, {trees} trees", groups.len()))
}

fn c07_series_reduced() -> Verdict {
    let mut sizes = Vec::new();
    for n in 1..=7 {
        let cat = Family::BinaryCaterpillar(n).generate().map_err(|e| e.to_string())?;
        let r = verify_extremal(&TreeClass::SeriesReduced(n), &cat, SERIES_TOL).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("n={n}: max {} at {}", r.rho_max, serialize_newick(&r.argmax)))?;
        sizes.push(r.class_size.to_string());
    }
    Ok(format!("class sizes {}", sizes.join(",")))
}

fn c08_caterpillar_recursion() -> Verdict {
    for n in 1..=12 {
        let tree = Family::BinaryCaterpillar(n).generate().map_err(|e| e.to_string())?;
        let p = caterpillar_charpoly(n).map_err(|e| e.to_string())?;
        ensure(p == char_poly(&tree), || format!("n={n}: recursion differs"))?;
    }
    let points = chebyshev_sample_points();
    for n in 2..=8 {
        for x in &points {
            ensure(chebyshev_form_check(n, x).map_err(|e| e.to_string())?, || format!("n={n}, x={x}"))?;
        }
    }
    Ok(format!("recursion n<=12, closed form at {} points for n<=8", points.len()))
}

fn c09_trig() -> Verdict {
    let mut worst_rel: f64 = 0.0;
    for n in 3..=30 {
        let tree = Family::BinaryCaterpillar(n).generate().map_err(|e| e.to_string())?;
        let numeric = spectral_radius(&tree, DEFAULT_TOL).map_err(|e| e.to_string())?.rho;
        let trig = trig_spectral_radius(n, 1e-14).map_err(|e| e.to_string())?.rho;
        let rel = (trig - numeric).abs() / numeric;
        ensure(rel <= TRIG_REL_TOL, || format!("n={n}: trig {trig} vs {numeric}"))?;
        worst_rel = worst_rel.max(rel);
    }
    let mut worst_gap: f64 = 0.0;
    for n in 10..=200 {
        let rho = trig_spectral_radius(n, 1e-14).map_err(|e| e.to_string())?.rho;
        let gap = (rho - asymptotic_radius(n)).abs();
        ensure(gap <= ASYMPTOTIC_SLACK, || format!("n={n}: gap {gap}"))?;
        worst_gap = worst_gap.max(gap);
    }
    Ok(format!("max relative error {worst_rel:.1e}, max asymptotic gap {worst_gap:.3}"))
}

fn c10_coefficients(corpus: &[RootedTree]) -> Verdict {
    let mut checked = 0;
    for t in corpus.iter().filter(|t| t.leaf_count() <= 8 && t.height() <= 5) {
        let c = count_collections(t, COLLECTION_BUDGET).map_err(|e| e.to_string())?;
        let gamma = gamma_coefficients(t);
        let counts: Vec<BigInt> = c.counts.iter().map(|&x| BigInt::from(x)).collect();
        let n = t.leaf_count();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let total_ok = BigInt::from(c.total) == sign * char_poly(t).eval(&BigInt::from(-1));
        ensure(counts == gamma && total_ok, || format!("{}: {:?} vs {:?}", serialize_newick(t), c.counts, gamma))?;
        checked += 1;
    }
    Ok(format!("{checked} trees"))
}

fn c11_dary() -> Verdict {
    let mut checked = 0;
    for (d, max_leaves) in [(2usize, 8usize), (3, 9)] {
        for l in 1..=max_leaves {
            for t in ancestral::enumeration::enumerate_class(&TreeClass::DaryByLeaves(d, l)).map_err(|e| e.to_string())? {
                let check = dary_determinant_check(&t, d).map_err(|e| e.to_string())?;
                ensure(check.equal, || format!("d={d} {}: {} vs {}", serialize_newick(&t), check.lhs, check.rhs))?;
                if d == 2 {
                    let total = count_collections(&t, COLLECTION_BUDGET).map_err(|e| e.to_string())?.total;
                    ensure(total == 4u64.pow(l as u32 - 1), || format!("{}: {total} collections", serialize_newick(&t)))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} binary and ternary trees"))
}

fn c12_operations() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut summary = Vec::new();
    for kind in [OpKind::BranchShift, OpKind::StarShift, OpKind::LeafSwap] {
        let (mut done, mut witnessed) = (0, 0);
        while done < OPS_SAMPLES {
            let t = random_tree_max_leaves(&mut rng, 12);
            let Some(spec) = random_spec(&mut rng, &t, kind) else { continue };
            let (_, m) = check_monotonicity(&t, &spec, DEFAULT_TOL).map_err(|e| e.to_string())?;
            let label = || format!("{kind} {spec:?} on {}: {m:?}", serialize_newick(&t));
            ensure(m.rho_after >= m.rho_before - MONOTONE_TOL, label)?;
            ensure(m.dominated != Some(false), label)?;
            if m.hypothesis_witnessed {
                ensure(m.rho_after > m.rho_before + STRICT_MARGIN, label)?;
                witnessed += 1;
            }
            done += 1;
        }
        summary.push(format!("{kind} {done} ({witnessed} strict)"));
    }
    Ok(summary.join(", "))
}

fn c13_newick() -> Verdict {
    let families = [
        "star:1", "star:7", "path-broom:4,3", "broom:0,2", "broom:3,5", "binary-caterpillar:1", "binary-caterpillar:9",
        "dary:2,3", "dary:3,2", "greedy:5,5,3,1,1", "greedy:2,2", "star-plus-path:3,4",
    ];
    let mut trees: Vec<RootedTree> = families
        .iter()
        .map(|s| s.parse::<Family>().and_then(|f| f.generate()).expect("valid family"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    trees.extend((0..1000).map(|_| random_tree_max_leaves(&mut rng, 20)));
    for t in &trees {
        let back = parse_newick(&serialize_newick(t)).map_err(|e| e.to_string())?;
        ensure(back.parents() == t.parents(), || serialize_newick(t))?;
    }
    Ok(format!("{} family trees + 1000 random trees", families.len()))
}

fn c14_determinism() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ancestral"))
            .args(["verify-all", "--max-leaves", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("exit status {:?}", a.status.code()))?;
    ensure(b.status.code() == Some(0), || format!("exit status {:?}", b.status.code()))?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("two runs, {} identical bytes, exit 0", a.stdout.len()))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus10();
    let criteria: Vec<Criterion> = vec![
        ("sample tree matrices and spectrum", Box::new(c01_sample_tree)),
        ("gram identity", Box::new(|| c02_gram(&corpus))),
        ("eigenvalue-one theorem", Box::new(|| c03_eigen_one(&corpus))),
        ("spectral radius bounds", Box::new(|| c04_bounds(&corpus))),
        ("broom theorem", Box::new(c05_broom)),
        ("greedy caterpillar theorem", Box::new(c06_greedy)),
        ("series-reduced theorem", Box::new(c07_series_reduced)),
        ("caterpillar recursion and closed form", Box::new(c08_caterpillar_recursion)),
        ("trigonometric root and asymptotics", Box::new(c09_trig)),
        ("path-collection coefficients", Box::new(|| c10_coefficients(&corpus))),
        ("d-ary determinant", Box::new(c11_dary)),
        ("tree operation monotonicity", Box::new(c12_operations)),
        ("newick round trip", Box::new(c13_newick)),
        ("cli determinism", Box::new(c14_determinism)),
    ];
    println!("corpus: {} trees with at most 10 leaves", corpus.len());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let verdict = f();
        let secs = t0.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
