// The weighted backward shift, its right inverse, and the growth of
// ||A^n e_2n|| that makes it unbounded.
//
// cargo run --example shift_operator

use std::error::Error;

use hypershift::operators::{ShiftOperator, WeightSequence};
use hypershift::spaces::{CoordVector, SpaceSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let weights: WeightSequence = "exp:2".parse()?;
    let a = ShiftOperator::new(weights, SpaceSpec::l1());

    let x: CoordVector = "{1: 5, 2: 1, 3: -1/3}".parse()?;
    println!("x        = {x}");
    println!("A x      = {}", a.apply(&x));
    println!("A^2 x    = {}", a.power(2, &x));
    println!("B x      = {}", a.right_inverse(&x));
    println!("A B x    = {}", a.apply(&a.right_inverse(&x)));
    println!("B A x    = {}", a.right_inverse(&a.apply(&x)));
    println!("B^3 x    = {}", a.right_inverse_power(3, &x));

    println!("n  ||A^n e_2n||  |w_n|");
    for n in 1..=6 {
        let w = a.unboundedness_witness(n);
        println!("{n}  {}  {}  {}", w.value, w.floor, if w.certified { "ok" } else { "FAIL" });
    }

    let table: WeightSequence = "table:[2,3,5];tail=geometric:2".parse()?;
    let w: Vec<String> = (1..=7).map(|k| table.weight(k).to_string()).collect();
    println!("table weights: {}", w.join(", "));
    println!("T(1) = {}", table.reciprocal_tail(1)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
