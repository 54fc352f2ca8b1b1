use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::{Rational, Scalar};
use crate::spaces::CoordVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    /// The check could not be carried out; `rhs` holds the error message.
    #[serde(rename = "error")]
    Error,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// One side of a recorded comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Scalar(Scalar),
    Vector(CoordVector),
}

impl From<Scalar> for Operand {
    fn from(s: Scalar) -> Self {
        Operand::Scalar(s)
    }
}

impl From<Rational> for Operand {
    fn from(r: Rational) -> Self {
        Operand::Scalar(Scalar::Real(r))
    }
}

impl From<&Rational> for Operand {
    fn from(r: &Rational) -> Self {
        Operand::Scalar(Scalar::Real(r.clone()))
    }
}

impl From<CoordVector> for Operand {
    fn from(v: CoordVector) -> Self {
        Operand::Vector(v)
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Scalar(s) => write!(f, "{s}"),
            Operand::Vector(v) => write!(f, "{v}"),
        }
    }
}

impl Operand {
    fn parse(s: &str) -> Option<Operand> {
        if s.trim_start().starts_with('{') {
            s.parse().ok().map(Operand::Vector)
        } else {
            s.parse().ok().map(Operand::Scalar)
        }
    }
}

fn holds(lhs: &Operand, rel: Relation, rhs: &Operand) -> bool {
    if rel == Relation::Eq {
        return lhs == rhs;
    }
    let (Operand::Scalar(Scalar::Real(a)), Operand::Scalar(Scalar::Real(b))) = (lhs, rhs) else {
        return false;
    };
    match rel {
        Relation::Le => a <= b,
        Relation::Ge => a >= b,
        Relation::Lt => a < b,
        Relation::Gt => a > b,
        Relation::Eq | Relation::Error => unreachable!(),
    }
}

/// A recorded exact comparison. The verdict is a function of `lhs`, `relation`
/// and `rhs` alone, so a serialized certificate can be re-checked without
/// recomputing anything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub claim: String,
    pub lhs: String,
    pub relation: Relation,
    pub rhs: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub context: BTreeMap<String, String>,
}

impl Certificate {
    pub fn compare(
        name: impl Into<String>,
        claim: impl Into<String>,
        lhs: impl Into<Operand>,
        relation: Relation,
        rhs: impl Into<Operand>,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let verdict = Verdict::from_bool(holds(&lhs, relation, &rhs));
        Certificate {
            name: name.into(),
            claim: claim.into(),
            lhs: lhs.to_string(),
            relation,
            rhs: rhs.to_string(),
            verdict,
            context: BTreeMap::new(),
        }
    }

    /// A failing certificate for a check that could not run.
    pub fn error(name: impl Into<String>, claim: impl Into<String>, message: impl fmt::Display) -> Self {
        Certificate {
            name: name.into(),
            claim: claim.into(),
            lhs: "error".into(),
            relation: Relation::Error,
            rhs: message.to_string(),
            verdict: Verdict::Fail,
            context: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.context.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Recomputes the verdict from the serialized operands.
    pub fn recheck(&self) -> bool {
        if self.relation == Relation::Error {
            return false;
        }
        match (Operand::parse(&self.lhs), Operand::parse(&self.rhs)) {
            (Some(l), Some(r)) => holds(&l, self.relation, &r),
            _ => false,
        }
    }

    /// The recorded verdict agrees with a fresh re-check.
    pub fn is_consistent(&self) -> bool {
        self.recheck() == self.passed()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.verdict, self.name, self.claim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_rational;

    #[test]
    fn verdict_follows_operands() {
        let c = Certificate::compare("a", "1/3 <= 1/2", parse_rational("1/3").unwrap(), Relation::Le, parse_rational("1/2").unwrap());
        assert!(c.passed() && c.recheck());
        let d = Certificate::compare("b", "3 < 2", Scalar::from_integer(3), Relation::Lt, Scalar::from_integer(2));
        assert!(!d.passed() && d.is_consistent());
        let v: CoordVector = "{1: 1/2, 3: 1+i}".parse().unwrap();
        let e = Certificate::compare("c", "v == v", v.clone(), Relation::Eq, v);
        assert!(e.passed() && e.recheck());
    }

    #[test]
    fn complex_operands_never_order() {
        let c = Certificate::compare("z", "", "1+i".parse::<Scalar>().unwrap(), Relation::Le, Scalar::from_integer(5));
        assert!(!c.passed());
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = Certificate::compare("a", "", Scalar::from_integer(1), Relation::Le, Scalar::from_integer(2));
        c.lhs = "3".into();
        assert!(!c.is_consistent());
        let err = Certificate::error("x", "", "boom");
        assert!(!err.passed() && err.is_consistent());
    }

    #[test]
    fn json_shape() {
        let c = Certificate::compare("a", "claim", Scalar::ratio(1, 2), Relation::Ge, Scalar::zero()).with("m", 3);
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(
            j,
            r#"{"name":"a","claim":"claim","lhs":"1/2","relation":">=","rhs":"0","verdict":"pass","context":{"m":"3"}}"#
        );
        let back: Certificate = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
    }
}
