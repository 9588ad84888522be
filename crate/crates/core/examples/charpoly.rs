//! Exact characteristic polynomial and its gamma coefficients, checked by two methods.
use ancestral::exact::{char_poly, faddeev_leverrier};
use ancestral::families::Family;
use ancestral::matrices::ancestral_matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for family in ["broom:2,3", "binary-caterpillar:6", "dary:2,3"] {
        let tree = family.parse::<Family>()?.generate()?;
        let p = char_poly(&tree);
        assert_eq!(p, faddeev_leverrier(&ancestral_matrix(&tree)));
        let gamma: Vec<String> = p.gamma().iter().map(ToString::to_string).collect();
        println!("{family}\n  p(x) = {p}\n  gamma = {}", gamma.join(" "));
    }
    Ok(())
}
