// Targets from the dense enumeration, the orbit schedule, and how the orbit
// of the prefix x_M passes near each target.
//
// cargo run --example orbit_schedule

use std::error::Error;

use hypershift::constructions::{
    hypercyclic_prefix, orbit_visit, schedule_from_enumeration, DenseEnumeration, DEFAULT_SEARCH_CAP,
};
use hypershift::operators::ShiftOperator;
use hypershift::spaces::SpaceSpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let enumeration = DenseEnumeration::real();
    for m in [1, 2, 10, 50, 1000] {
        let y = enumeration.element(m);
        println!("y^({m}) = {y}  (index_of -> {:?})", enumeration.index_of(&y));
    }

    let a = ShiftOperator::new("exp:2".parse()?, SpaceSpec::l2());
    let m_count = 8;
    let schedule = schedule_from_enumeration(a.weights(), &enumeration, m_count, DEFAULT_SEARCH_CAP)?;
    println!("n = {:?}", schedule.exponents);
    println!(
        "{} pair certificates, all pass: {}",
        schedule.certificates.len(),
        schedule.passed()
    );

    let prefix = hypercyclic_prefix(&a, &schedule, m_count)?;
    println!("x_{m_count} has {} nonzero coordinates, tail bound {}", prefix.vector.nnz(), prefix.tail_bound);
    println!("summand supports disjoint: {}", prefix.disjoint_supports());

    for m in 1..=m_count {
        let visit = orbit_visit(&a, &prefix, m)?;
        println!(
            "m = {m}: A^{} x lands within {:.3e} of y^({m}) (bound {:.3e}), {}",
            visit.n_m,
            approx(&visit.residual_norm.hi),
            approx(&visit.bound),
            if visit.passed() { "certified" } else { "FAILED" }
        );
    }
    Ok(())
}

fn approx(r: &hypershift::scalars::Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
