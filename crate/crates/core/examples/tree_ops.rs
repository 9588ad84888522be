//! Branch shift, star shift and leaf swap never decrease the spectral radius.
use ancestral::newick::{parse_newick, serialize_newick};
use ancestral::numfmt::format_float;
use ancestral::ops::{check_monotonicity, OpSpec};
use ancestral::spectral::DEFAULT_TOL;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("((,),(,));", OpSpec::branch_shift(vec![0, 1], 4)),
        ("(,,);", OpSpec::star_shift(0, 3)),
        ("((,),(,));", OpSpec::leaf_swap(vec![0, 1], 4, 2)),
    ];
    for (newick, spec) in cases {
        let tree = parse_newick(newick)?;
        let (after, m) = check_monotonicity(&tree, &spec, DEFAULT_TOL)?;
        println!(
            "{:<12} {newick} -> {}  rho {} -> {}  dominated {:?}",
            spec.kind.to_string(),
            serialize_newick(&after),
            format_float(m.rho_before),
            format_float(m.rho_after),
            m.dominated
        );
    }
    Ok(())
}
