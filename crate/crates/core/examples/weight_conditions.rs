// Prefix certification of monotone, summable-reciprocal weights.
//
// cargo run --example weight_conditions

use std::error::Error;

use hypershift::operators::WeightSequence;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for spec in ["exp:2", "exp:3/2", "exp:1+1*i", "table:[1,2,4];tail=geometric:2"] {
        let w: WeightSequence = spec.parse()?;
        let c = w.check_conditions(200);
        println!(
            "{spec:<32} {} ({} certificates, T(1) = {})",
            if c.passed() { "PASS" } else { "FAIL" },
            c.monotone.len() + c.summable.len(),
            w.reciprocal_tail(1)?
        );
    }

    for spec in ["table:[1,1,1];tail=claim:5", "table:[3,2];tail=geometric:2", "table:[1,2]"] {
        let w: WeightSequence = spec.parse()?;
        let c = w.check_conditions(50);
        let why = c.violation.as_ref().map(|v| v.to_string()).unwrap_or_default();
        println!("{spec:<32} FAIL: {why}");
        if let Some(first) = c.certificates().find(|c| !c.passed()) {
            println!("    {first}: {} {} {}", first.lhs, first.relation, first.rhs);
        };
    }

    for spec in ["exp:1", "exp:1/2+1/2*i", "table:[2,0]"] {
        if let Err(e) = spec.parse::<WeightSequence>() {
            println!("{spec:<32} rejected: {e}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
