// Exact periodic points and how close they come to a given vector.
//
// cargo run --example periodic_points

use std::error::Error;

use hypershift::constructions::{periodic_fixpoint_check, periodic_point, periodic_point_distance};
use hypershift::operators::ShiftOperator;
use hypershift::scalars::Scalar;
use hypershift::spaces::{CoordVector, SpaceSpec};
use num_traits::ToPrimitive;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = ShiftOperator::new("exp:2".parse()?, SpaceSpec::l1());
    let w = a.weights();

    let pp = periodic_point(w, vec![Scalar::one()], 4)?;
    println!("N = 1: {}", pp.vector());
    println!("{}", periodic_fixpoint_check(w, &pp));

    let head: Vec<Scalar> = ["1", "-1", "1/2"].iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let pp = periodic_point(w, head, 6)?;
    println!("N = 3, K = 6: {} coordinates", pp.vector().nnz());
    println!("{}", periodic_fixpoint_check(w, &pp));
    // Coordinates past the materialized blocks are available on demand.
    let far = pp.coefficient(w, 40);
    println!("coefficient of e_40 = 1/2^{}", far.inverse()?.re().numer().bits() - 1);

    let y: CoordVector = "{1: 1, 2: -3/2}".parse()?;
    for n in [2, 4, 8, 16] {
        let d = periodic_point_distance(&a, &y, n, 3)?;
        let dist = d.distance.hi.to_f64().unwrap_or(f64::NAN);
        println!("N = {n:>2}: ||x - y|| <= {dist:.3e} <= {}  {}", d.bound, d.certificate.verdict);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
