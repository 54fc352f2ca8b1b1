// Norms of one finitely supported vector in several sequence spaces.
//
// cargo run --example sequence_norms

use std::error::Error;

use hypershift::spaces::{c_space_embed, CoordVector, SpaceSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x: CoordVector = "{1: 3, 2: -4, 5: 1/2}".parse()?;
    println!("x = {x}");
    for space in ["l1", "l2", "l3", "lp:3/2", "c0", "c"] {
        let spec: SpaceSpec = space.parse()?;
        println!("{space:>7}: {}", spec.norm(&x));
    }

    // Higher precision narrows the irrational enclosures.
    let l2 = SpaceSpec::l2().with_precision(64);
    println!("l2 @ 64 bits: {}", l2.norm(&"{1: 1, 2: 1}".parse()?));

    // In c, index 1 is the constant sequence (1, 1, ...).
    let s = c_space_embed(&x);
    let terms: Vec<String> = s.terms.iter().map(ToString::to_string).collect();
    println!("x in c: ({}, ...) -> {}", terms.join(", "), s.limit);

    // Every basis vector has norm exactly one.
    let e7 = CoordVector::basis(7)?;
    for space in [SpaceSpec::l1(), SpaceSpec::l2(), SpaceSpec::c0(), SpaceSpec::c()] {
        assert!(space.norm(&e7).is_point());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
