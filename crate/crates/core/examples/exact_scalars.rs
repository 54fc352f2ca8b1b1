// Rational and Gaussian-rational arithmetic, and certified moduli.
//
// cargo run --example exact_scalars

use std::error::Error;

use hypershift::scalars::{nth_root_interval, parse_rational, Scalar};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a: Scalar = "1/2+3/4*i".parse()?;
    let b: Scalar = "2-i".parse()?;
    println!("a = {a}, b = {b}");
    println!("a + b = {}", &a + &b);
    println!("a * b = {}", &a * &b);
    println!("a / b = {}", a.checked_div(&b)?);
    println!("conj(a) = {}", a.conj());

    // |a|^2 is exact; |a| itself is bracketed.
    println!("|a|^2 = {}", a.modulus_squared());
    println!("|a| in {}", a.modulus_interval(40));
    let five: Scalar = "3+4*i".parse()?;
    println!("|3+4i| = {} (exact)", five.modulus_interval(40));

    let z = "1+i".parse::<Scalar>()?.pow(8);
    println!("(1+i)^8 = {z}");

    let cube = nth_root_interval(&parse_rational("2")?, 3, 24);
    println!("2^(1/3) in {cube}");

    for bad in ["0.5", "1/0", "1+*i"] {
        if let Err(e) = bad.parse::<Scalar>() {
            println!("rejected {bad:?}: {e}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
