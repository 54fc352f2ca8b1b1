// A full certification run and its machine-readable outputs.
//
// cargo run --example certify_report

use std::error::Error;

use hypershift::certify::{emit_report, run_suite, Report, ReportFormat, SuiteConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = SuiteConfig {
        spaces: vec!["l1".parse()?, "l2".parse()?, "c0".parse()?],
        targets: 6,
        ..SuiteConfig::default()
    };
    let report = run_suite(&config);
    for suite in &report.suites {
        let failed = suite.certificates.iter().filter(|c| !c.passed()).count();
        println!("{:<14} {:>4} certificates, {failed} failed", suite.name, suite.certificates.len());
    }
    println!("summary: {:?}", report.summary);

    let json = String::from_utf8(emit_report(&report, ReportFormat::Json)?)?;
    let replayed = Report::from_json(&json)?;
    println!("json: {} bytes, re-checks: {}", json.len(), replayed.recheck());

    let curves = String::from_utf8(emit_report(&report, ReportFormat::CsvCurves)?)?;
    for line in curves.lines().take(4) {
        println!("{}", line.chars().take(100).collect::<String>());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
