//! Lower and upper bounds on the spectral radius in terms of ancestral depths.
use ancestral::bounds::bound_report;
use ancestral::families::Family;
use ancestral::numfmt::format_float;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for family in ["dary:3,2", "star-plus-path:3,5", "greedy:4,3,2,1"] {
        let tree = family.parse::<Family>()?.generate()?;
        let r = bound_report(&tree)?;
        println!("{family}: rho = {}", format_float(r.rho));
        for c in &r.checks {
            println!("  {:<14} {:>14}  margin {}", c.name, format_float(c.bound), format_float(c.margin));
        }
        println!("  Q = {}, terminal Wiener index = {}", r.q, r.terminal_wiener);
    }
    Ok(())
}
