//! Binary caterpillars: exact polynomial, trigonometric root and asymptotic radius.
use ancestral::caterpillar::caterpillar_report;
use ancestral::numfmt::format_float;
use ancestral::spectral::DEFAULT_TOL;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>4} {:>16} {:>16} {:>16}", "n", "trig root", "eigensolver", "asymptotic");
    for n in [3, 5, 10, 20, 40, 80] {
        let r = caterpillar_report(n, DEFAULT_TOL)?;
        let trig = r.trig_rho.map(format_float).unwrap_or_else(|| "-".into());
        println!("{n:>4} {trig:>16} {:>16} {:>16}", format_float(r.numeric_rho), format_float(r.asymptotic));
    }
    println!("P_6(x) = {}", caterpillar_report(6, DEFAULT_TOL)?.poly);
    Ok(())
}
