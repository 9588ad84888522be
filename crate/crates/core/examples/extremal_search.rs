//! Exhaustive search confirming the spectral-radius maximizer in a class of trees.
use ancestral::enumeration::{claimed_maximizer, verify_extremal, Check, TreeClass};
use ancestral::newick::serialize_newick;
use ancestral::numfmt::format_float;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("vertices-leaves:10,3", Check::Broom),
        ("outdegrees:3,2,2,1", Check::Greedy),
        ("series-reduced:6", Check::BinaryCaterpillar),
    ];
    for (class, check) in cases {
        let class: TreeClass = class.parse()?;
        let claimed = claimed_maximizer(&class, check)?;
        let r = verify_extremal(&class, &claimed, 1e-7)?;
        println!(
            "{class}: {} trees, max rho {} at {} (claimed {}), holds {}",
            r.class_size,
            format_float(r.rho_max),
            serialize_newick(&r.argmax),
            serialize_newick(&claimed),
            r.holds
        );
    }
    Ok(())
}
