//! Edge-disjoint collections of upward leaf paths count the gamma coefficients.
use ancestral::collections::{collections_with, count_collections, DEFAULT_BUDGET};
use ancestral::exact::gamma_coefficients;
use ancestral::newick::parse_newick;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree = parse_newick("((,),(,,(,)));")?;
    let counts = count_collections(&tree, DEFAULT_BUDGET)?;
    let gamma = gamma_coefficients(&tree);
    for (k, (c, g)) in counts.counts.iter().zip(&gamma).enumerate() {
        println!("k = {k}: {c} collections, gamma_{k} = {g}");
    }
    println!("total {}", counts.total);
    let pairs = collections_with(&tree, 1, DEFAULT_BUDGET)?;
    println!("collections with one nonempty path (choice per leaf): {pairs:?}");
    Ok(())
}
