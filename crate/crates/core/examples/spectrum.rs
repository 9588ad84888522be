//! Eigenvalues, spectral radius with its Perron vector, and the eigenvalue-1 certificate.
use ancestral::matrices::ancestral_matrix;
use ancestral::newick::parse_newick;
use ancestral::numfmt::format_float;
use ancestral::spectral::{eigenvalue_one_certificate, spectral_radius, spectrum, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree = parse_newick("((,),(,,(,)));")?;
    let s = spectrum(&tree, DEFAULT_TOL)?;
    let values: Vec<String> = s.eigenvalues.iter().map(|&x| format_float(x)).collect();
    println!("eigenvalues: {} (residual {:.1e})", values.join(" "), s.residual);

    let r = spectral_radius(&tree, DEFAULT_TOL)?;
    let perron: Vec<String> = r.perron.iter().map(|&x| format_float(x)).collect();
    println!("rho = {} on branch {:?}, perron = [{}]", format_float(r.rho), r.branch, perron.join(", "));

    let cert = eigenvalue_one_certificate(&tree)?;
    println!("eigenvalue 1 has multiplicity {}, basis {:?}", cert.multiplicity, cert.basis);
    println!("certificate verified: {}", cert.verify(&ancestral_matrix(&tree)));
    Ok(())
}
