//! Parsing and serializing topology-only Newick, with isomorphism-invariant encodings.
use ancestral::newick::{parse_newick, serialize_newick};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse_newick("(A,(B,C)x,(D,E,(F,G)));")?;
    let b = parse_newick("(((,),,),(,),);")?;
    println!("{} vertices, {} leaves, height {}", a.vertex_count(), a.leaf_count(), a.height());
    println!("serialized: {}", serialize_newick(&a));
    println!("canonical:  {}", a.canonical_encoding());
    println!("isomorphic to {}: {}", serialize_newick(&b), a.is_isomorphic(&b));
    match parse_newick("((,);") {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("malformed input rejected: {e}"),
    }
    Ok(())
}
