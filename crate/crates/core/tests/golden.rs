//! Pinned outputs. A missing golden file is written on first run; set
//! `BLESS=1` to rewrite them deliberately.

use std::path::PathBuf;

use hypershift::certify::{emit_report, run_suite, ReportFormat, SuiteConfig};
use hypershift::constructions::DenseEnumeration;
use sha2::{Digest, Sha256};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("BLESS").is_some() || !path.exists() {
        std::fs::write(&path, actual).expect("write golden file");
        return;
    }
    let expected = std::fs::read_to_string(&path).expect("read golden file");
    assert!(expected == actual, "{} differs from the pinned output", path.display());
}

#[test]
fn enumeration_prefix_hash() {
    let e = DenseEnumeration::real();
    let mut hasher = Sha256::new();
    for y in e.take(1000) {
        hasher.update(y.to_string().as_bytes());
        hasher.update(b"\n");
    }
    check("enumeration_real_1000.sha256", &format!("{}\n", hex::encode(hasher.finalize())));
}

#[test]
fn complex_enumeration_prefix_hash() {
    let e = DenseEnumeration::complex();
    let mut hasher = Sha256::new();
    for y in e.take(1000) {
        hasher.update(y.to_string().as_bytes());
        hasher.update(b"\n");
    }
    check("enumeration_complex_1000.sha256", &format!("{}\n", hex::encode(hasher.finalize())));
}

#[test]
fn reference_report() {
    let config = SuiteConfig {
        targets: 5,
        ..SuiteConfig::default()
    };
    let json = String::from_utf8(emit_report(&run_suite(&config), ReportFormat::Json).unwrap()).unwrap();
    check("report_exp2_l1_M5.json", &json);
}
