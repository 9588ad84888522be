//! Command-line front end. Every subcommand is a pure function of its
//! arguments; exit code 0 means success or verified, 1 means a violated
//! check or a counterexample, 2 means a usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::bound_report;
use crate::caterpillar::caterpillar_report;
use crate::collections::{count_collections, DEFAULT_BUDGET};
use crate::enumeration::{claimed_maximizer, verify_extremal, Check, TreeClass};
use crate::exact::char_poly;
use crate::families::{random_tree, Family};
use crate::matrices::{ancestral_matrix, path_incidence_matrix};
use crate::newick::{parse_newick, serialize_newick};
use crate::numfmt::{format_float, json_float, json_int};
use crate::ops::{check_monotonicity, OpKind, OpSpec};
use crate::spectral::{eigenvalue_one_certificate, spectrum, DEFAULT_TOL};
use crate::tree::RootedTree;
use crate::verify::{verify_all, EXTREMAL_TOL, STRICT_TOL};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Violated,
}

impl Outcome {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Outcome::Success
        } else {
            Outcome::Violated
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ancestral", version, about = "Ancestral matrices of rooted trees: spectra, exact polynomials and theorem checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Exactly one tree source.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Newick text, e.g. "((,),(,,(,)));"
    #[arg(long, alias = "tree")]
    newick: Option<String>,
    /// UTF-8 file with one Newick tree per line
    #[arg(long)]
    file: Option<PathBuf>,
    /// Generator spec, e.g. broom:2,3 or greedy:5,5,3,1,1
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,
}

impl Source {
    fn trees(&self) -> Result<Vec<RootedTree>, CliError> {
        if let Some(text) = &self.newick {
            return Ok(vec![parse_newick(text).map_err(input)?]);
        }
        if let Some(spec) = &self.generator {
            let family: Family = spec.parse().map_err(input)?;
            return Ok(vec![family.generate().map_err(input)?]);
        }
        let path = self.file.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        let trees = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| parse_newick(l).map_err(|e| input(format!("line {}: {e}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        if trees.is_empty() {
            return Err(input(format!("{}: no trees", path.display())));
        }
        Ok(trees)
    }
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[command(flatten)]
    source: Source,
    /// Emit JSON
    #[arg(long)]
    json: bool,
    /// Eigensolver residual tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OpArg {
    BranchShift,
    StarShift,
    LeafSwap,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ancestral matrix C(T)
    Matrix(TreeArgs),
    /// Leaf-by-edge path-incidence matrix
    Incidence(TreeArgs),
    /// Exact characteristic polynomial det(xI - C) and its gamma coefficients
    Charpoly(TreeArgs),
    /// Eigenvalues of C(T), largest first
    Spectrum(TreeArgs),
    /// Spectral radius bounds; exits 1 if any is violated
    Bounds(TreeArgs),
    /// Exact eigenvalue-1 certificate
    Certificate(TreeArgs),
    /// Edge-disjoint upward-path collections by number of non-trivial paths
    Collections {
        #[command(flatten)]
        tree: TreeArgs,
        /// Maximum number of path-choice combinations
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Binary caterpillar polynomial and spectral radius
    Caterpillar {
        /// Number of leaves
        #[arg(long)]
        n: usize,
        /// Emit JSON
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Exhaustive maximality check over a tree class
    Search {
        /// Class, e.g. vertices-leaves:7,3, outdegrees:3,2,2, series-reduced:5
        #[arg(long)]
        class: String,
        /// Claimed maximizer: greedy, broom or binary-caterpillar
        #[arg(long)]
        check: String,
        /// Emit JSON
        #[arg(long)]
        json: bool,
    },
    /// Apply a branch shift, star shift or leaf swap and compare spectral radii
    Transform {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum)]
        op: OpArg,
        /// Comma-separated vertices v1,...,vk (just v1 for a star shift)
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
        /// Root of the moved branch (branch shift) or w1 (leaf swap)
        #[arg(long)]
        branch: Option<usize>,
        /// u (star shift) or w2 (leaf swap)
        #[arg(long)]
        leaf: Option<usize>,
    },
    /// Print a generated tree as Newick
    Gen {
        /// Generator spec, e.g. dary:3,2
        #[arg(long = "gen", value_name = "SPEC", conflicts_with = "random")]
        generator: Option<String>,
        /// Random recursive tree with this many vertices
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit JSON
        #[arg(long)]
        json: bool,
    },
    /// Run every theorem suite over all trees up to a leaf count
    VerifyAll {
        #[arg(long, default_value_t = 7)]
        max_leaves: usize,
    },
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Violated) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match cmd {
        Command::Matrix(a) => per_tree(&a, out, |t| {
            let c = ancestral_matrix(t);
            Ok((c.to_string(), c.to_json(), true))
        }),
        Command::Incidence(a) => per_tree(&a, out, |t| {
            let p = path_incidence_matrix(t);
            let mut j = p.to_json();
            j["edges"] = json!(p.edge_order);
            Ok((p.to_string(), j, true))
        }),
        Command::Charpoly(a) => per_tree(&a, out, |t| {
            let p = char_poly(t);
            let gamma = p.gamma();
            let high_first: Vec<Value> = p.coeffs().iter().rev().map(json_int).collect();
            let text = format!(
                "coefficients: {}\ngamma: {}\n",
                p.to_text(),
                gamma.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
            );
            let j = json!({ "coefficients": high_first, "gamma": gamma.iter().map(json_int).collect::<Vec<_>>() });
            Ok((text, j, true))
        }),
        Command::Spectrum(a) => {
            let tol = a.tol;
            per_tree(&a, out, |t| {
                let s = spectrum(t, tol).map_err(input)?;
                let text: String = s.eigenvalues.iter().map(|&x| format_float(x) + "\n").collect();
                let j = json!({
                    "eigenvalues": s.eigenvalues.iter().map(|&x| json_float(x)).collect::<Vec<_>>(),
                    "residual": json_float(s.residual),
                });
                Ok((text, j, true))
            })
        }
        Command::Bounds(a) => per_tree(&a, out, |t| {
            let r = bound_report(t).map_err(input)?;
            let mut text = format!("rho {}\n", format_float(r.rho));
            let mut checks = Vec::new();
            for c in &r.checks {
                let verdict = if c.satisfied { "OK" } else { "VIOLATED" };
                text += &format!(
                    "{} {} margin={} {verdict}\n",
                    c.name,
                    format_float(c.bound),
                    format_float(c.margin)
                );
                checks.push(json!({
                    "name": c.name,
                    "bound": json_float(c.bound),
                    "margin": json_float(c.margin),
                    "satisfied": c.satisfied,
                }));
            }
            text += &format!("q {}\nterminal_wiener {}\n", r.q, r.terminal_wiener);
            let j = json!({
                "rho": json_float(r.rho),
                "avg_ad": r.avg_ad.to_string(),
                "max_ad": r.max_ad,
                "tw_bound": r.tw_bound.to_string(),
                "height_bound": r.height_bound,
                "delta_bound": r.delta_bound.map(|b| b.to_string()),
                "q": r.q,
                "terminal_wiener": r.terminal_wiener,
                "checks": checks,
                "all_satisfied": r.all_satisfied,
            });
            Ok((text, j, r.all_satisfied))
        }),
        Command::Certificate(a) => per_tree(&a, out, |t| {
            let cert = eigenvalue_one_certificate(t).map_err(input)?;
            let ok = cert.verify(&ancestral_matrix(t));
            let mut text = format!("multiplicity {}\n", cert.multiplicity);
            for b in &cert.basis {
                text += &b.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
                text.push('\n');
            }
            text += &format!("verified {ok}\n");
            let j = json!({ "multiplicity": cert.multiplicity, "basis": cert.basis, "verified": ok });
            Ok((text, j, ok))
        }),
        Command::Collections { tree, budget } => per_tree(&tree, out, |t| {
            let c = count_collections(t, budget).map_err(input)?;
            let mut text: String = c.counts.iter().enumerate().map(|(k, n)| format!("{k} {n}\n")).collect();
            text += &format!("total {}\n", c.total);
            Ok((text, json!({ "counts": c.counts, "total": c.total }), true))
        }),
        Command::Caterpillar { n, json, tol } => {
            let r = caterpillar_report(n, tol).map_err(input)?;
            if json {
                let j = json!({
                    "n": n,
                    "coefficients": r.poly.coeffs().iter().rev().map(json_int).collect::<Vec<_>>(),
                    "trig_rho": r.trig_rho.map(json_float),
                    "numeric_rho": json_float(r.numeric_rho),
                    "asymptotic": json_float(r.asymptotic),
                });
                writeln!(out, "{j}")?;
            } else {
                writeln!(out, "coefficients: {}", r.poly.to_text())?;
                match r.trig_rho {
                    Some(x) => writeln!(out, "trig_rho {}", format_float(x))?,
                    None => writeln!(out, "trig_rho -")?,
                }
                writeln!(out, "numeric_rho {}", format_float(r.numeric_rho))?;
                writeln!(out, "asymptotic {}", format_float(r.asymptotic))?;
            }
            Ok(Outcome::Success)
        }
        Command::Search { class, check, json } => {
            let class: TreeClass = class.parse().map_err(input)?;
            let check: Check = check.parse().map_err(input)?;
            let claimed = claimed_maximizer(&class, check).map_err(input)?;
            let r = verify_extremal(&class, &claimed, EXTREMAL_TOL).map_err(input)?;
            if json {
                let j = json!({
                    "class": class.to_string(),
                    "check": check.to_string(),
                    "verified": r.holds,
                    "class_size": r.class_size,
                    "rho_max": json_float(r.rho_max),
                    "claimed_rho": json_float(r.claimed_rho),
                    "argmax": serialize_newick(&r.argmax),
                    "ties": r.ties.iter().map(serialize_newick).collect::<Vec<_>>(),
                });
                writeln!(out, "{j}")?;
            } else if r.holds {
                writeln!(
                    out,
                    "VERIFIED {class} {check} trees={} rho_max={} ties={}",
                    r.class_size,
                    format_float(r.rho_max),
                    r.ties.len()
                )?;
            } else {
                writeln!(
                    out,
                    "COUNTEREXAMPLE {} rho={} claimed_rho={}",
                    serialize_newick(&r.argmax),
                    format_float(r.rho_max),
                    format_float(r.claimed_rho)
                )?;
            }
            Ok(Outcome::from_ok(r.holds))
        }
        Command::Transform { tree, op, path, branch, leaf } => {
            let spec = match op {
                OpArg::BranchShift => OpSpec { kind: OpKind::BranchShift, path, branch_root: branch, leaf: None },
                OpArg::StarShift => OpSpec { kind: OpKind::StarShift, path, branch_root: None, leaf },
                OpArg::LeafSwap => OpSpec { kind: OpKind::LeafSwap, path, branch_root: branch, leaf },
            };
            let tol = tree.tol;
            per_tree(&tree, out, |t| {
                let (after, m) = check_monotonicity(t, &spec, tol).map_err(input)?;
                let ok = m.consistent(STRICT_TOL);
                let dominated = m.dominated.map_or("-".to_string(), |d| d.to_string());
                let text = format!(
                    "newick {}\nparents {}\nrho_before {}\nrho_after {}\ndominated {dominated}\nwitnessed {}\nconsistent {ok}\n",
                    serialize_newick(&after),
                    parents_text(&after),
                    format_float(m.rho_before),
                    format_float(m.rho_after),
                    m.hypothesis_witnessed,
                );
                let j = json!({
                    "newick": serialize_newick(&after),
                    "parents": after.parents(),
                    "rho_before": json_float(m.rho_before),
                    "rho_after": json_float(m.rho_after),
                    "dominated": m.dominated,
                    "witnessed": m.hypothesis_witnessed,
                    "consistent": ok,
                });
                Ok((text, j, ok))
            })
        }
        Command::Gen { generator, random, seed, json } => {
            let tree = match (generator, random) {
                (Some(spec), _) => spec.parse::<Family>().and_then(|f| f.generate()).map_err(input)?,
                (None, Some(n)) => random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n),
                (None, None) => return Err(input("gen needs --gen SPEC or --random N")),
            };
            if json {
                writeln!(out, "{}", json!({ "newick": serialize_newick(&tree), "parents": tree.parents() }))?;
            } else {
                writeln!(out, "{}", serialize_newick(&tree))?;
            }
            Ok(Outcome::Success)
        }
        Command::VerifyAll { max_leaves } => {
            let results = verify_all(max_leaves).map_err(input)?;
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let ok = results.iter().all(|r| r.passed());
            writeln!(out, "{} {}/{} suites passed", if ok { "VERIFIED" } else { "FAILED" }, results.iter().filter(|r| r.passed()).count(), results.len())?;
            Ok(Outcome::from_ok(ok))
        }
    }
}

fn parents_text(t: &RootedTree) -> String {
    t.parents()
        .iter()
        .map(|p| p.map_or("-".to_string(), |v| v.to_string()))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs `f` on every input tree. Text outputs are separated by blank lines;
/// JSON is one object, or an array for several trees.
fn per_tree(
    args: &TreeArgs,
    out: &mut dyn Write,
    f: impl Fn(&RootedTree) -> Result<(String, Value, bool), CliError>,
) -> Result<Outcome, CliError> {
    let trees = args.source.trees()?;
    let results = trees.iter().map(&f).collect::<Result<Vec<_>, _>>()?;
    let ok = results.iter().all(|r| r.2);
    if args.json {
        let mut values: Vec<Value> = results.into_iter().map(|r| r.1).collect();
        let v = if values.len() == 1 { values.pop().expect("one value") } else { Value::Array(values) };
        writeln!(out, "{v}")?;
    } else {
        for (i, (text, _, _)) in results.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            write!(out, "{text}")?;
        }
    }
    Ok(Outcome::from_ok(ok))
}
