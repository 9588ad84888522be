//! Ancestral and path-incidence matrices of a small tree, and the Gram identity between them.
use ancestral::matrices::{ancestral_matrix, gram_check, path_incidence_matrix};
use ancestral::newick::parse_newick;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree = parse_newick("((,),(,,(,)));")?;
    println!("ancestral matrix C:\n{}", ancestral_matrix(&tree));
    println!("path incidence P (leaf rows, edge columns):\n{}", path_incidence_matrix(&tree));
    println!("C == P * P^T: {}", gram_check(&tree));
    Ok(())
}
