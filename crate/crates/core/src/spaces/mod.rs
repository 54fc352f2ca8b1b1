//! Sequence spaces `ℓ_p`, `c₀` and `c` with their standard normalized Schauder
//! bases, and certified norm evaluation for finitely supported vectors.
//!
//! For `c` the basis is reindexed to start at 1: artifact index 1 stands for
//! the constant sequence `(1, 1, …)` and index `k + 1` for the standard unit
//! vector `e_k`. See [`c_space_embed`].

mod vector;

pub use vector::CoordVector;

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use thiserror::Error;

use crate::scalars::{nth_root_interval, parse_rational, Interval, Rational, Scalar};

/// Certified enclosure of a norm `‖v‖`.
pub type NormInterval = Interval;

pub const DEFAULT_PRECISION: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("basis indices start at 1")]
    ZeroIndex,
    #[error("malformed `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("lp exponent must satisfy p >= 1, got {0}")]
    ExponentBelowOne(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// `ℓ_p` for rational `p ≥ 1`.
    Lp(Rational),
    /// Vanishing sequences, sup norm.
    C0,
    /// Convergent sequences, sup norm.
    C,
}

/// The ambient Banach space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    kind: SpaceKind,
    precision: u32,
}

impl SpaceSpec {
    pub fn lp(p: Rational) -> Result<Self, SpaceError> {
        if p < Rational::one() {
            return Err(SpaceError::ExponentBelowOne(p.to_string()));
        }
        Ok(SpaceSpec {
            kind: SpaceKind::Lp(p),
            precision: DEFAULT_PRECISION,
        })
    }

    pub fn l1() -> Self {
        SpaceSpec::lp(Rational::one()).expect("p = 1")
    }

    pub fn l2() -> Self {
        SpaceSpec::lp(Rational::from_integer(2.into())).expect("p = 2")
    }

    pub fn c0() -> Self {
        SpaceSpec {
            kind: SpaceKind::C0,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn c() -> Self {
        SpaceSpec {
            kind: SpaceKind::C,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision.max(1);
        self
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `‖v‖` at the space's default precision.
    pub fn norm(&self, v: &CoordVector) -> NormInterval {
        self.norm_with(v, self.precision)
    }

    /// Certified enclosure of `‖v‖` with width `≤ 2^-precision · max(hi, 1)`.
    /// Degenerate whenever the norm is rational and computable without roots,
    /// which covers `c₀`, `c` and `ℓ_1` on real data.
    pub fn norm_with(&self, v: &CoordVector, precision: u32) -> NormInterval {
        match &self.kind {
            SpaceKind::C0 => sup_modulus(v.iter().map(|(_, x)| x), precision),
            SpaceKind::C => c_space_embed(v).sup_norm(precision),
            SpaceKind::Lp(p) => lp_norm(v, p, precision),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::C0 => f.write_str("c0"),
            SpaceKind::C => f.write_str("c"),
            SpaceKind::Lp(p) if p.is_integer() => write!(f, "l{p}"),
            SpaceKind::Lp(p) => write!(f, "lp:{p}"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = SpaceError;

    /// `l1`, `l2`, `l<int>`, `lp:<p>`, `c0`, `c`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parse_p = |p: &str| {
            parse_rational(p).map_err(|e| SpaceError::Parse {
                input: s.to_string(),
                reason: e.to_string(),
            })
        };
        match t {
            "c0" => Ok(SpaceSpec::c0()),
            "c" => Ok(SpaceSpec::c()),
            _ => {
                if let Some(p) = t.strip_prefix("lp:") {
                    SpaceSpec::lp(parse_p(p)?)
                } else if let Some(p) = t.strip_prefix('l').filter(|p| {
                    !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit())
                }) {
                    SpaceSpec::lp(parse_p(p)?)
                } else {
                    Err(SpaceError::Parse {
                        input: s.to_string(),
                        reason: "expected l1, l2, lp:<p>, c0 or c".into(),
                    })
                }
            }
        }
    }
}

fn sup_modulus<'a>(values: impl Iterator<Item = &'a Scalar>, precision: u32) -> NormInterval {
    values
        .max_by(|a, b| a.compare_modulus(b))
        .map(|x| x.modulus_interval(precision))
        .unwrap_or_else(Interval::zero)
}

fn lp_norm(v: &CoordVector, p: &Rational, precision: u32) -> NormInterval {
    if v.is_zero() {
        return Interval::zero();
    }
    let a = u64::try_from(p.numer()).expect("lp exponent numerator fits u64");
    let b = u64::try_from(p.denom()).expect("lp exponent denominator fits u64");
    // |x|^p = (|x|²)^(a / 2b)
    let (e_num, e_den) = crate::scalars::reduce_exponent(a, 2 * b);
    let e_num = u32::try_from(e_num).expect("exponent fits u32");
    let e_den = u32::try_from(e_den).expect("exponent fits u32");
    let a = u32::try_from(a).expect("exponent fits u32");
    let b = u32::try_from(b).expect("exponent fits u32");

    let slack = usize::BITS - v.nnz().leading_zeros();
    let mut bits = precision + 8 + slack;
    loop {
        let mut sum = Interval::zero();
        for (_, x) in v.iter() {
            let power = num_traits::Pow::pow(&x.modulus_squared(), e_num);
            let term = nth_root_interval(&power, e_den, bits);
            let term = if term.is_point() { term } else { term.outward(bits) };
            sum = sum.add(&term);
        }
        // ‖v‖ = S^(1/p) = (S^b)^(1/a)
        let lo = nth_root_interval(&num_traits::Pow::pow(&sum.lo, b), a, bits);
        let out = if sum.is_point() {
            lo
        } else {
            let hi = nth_root_interval(&num_traits::Pow::pow(&sum.hi, b), a, bits);
            Interval::new(lo.lo, hi.hi)
        };
        if out.meets_width(precision) {
            return out;
        }
        bits *= 2;
    }
}

/// A finitely supported vector of `c` written out as a concrete eventually
/// constant sequence: `terms` followed by `limit` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentSequence {
    pub terms: Vec<Scalar>,
    pub limit: Scalar,
}

impl ConvergentSequence {
    /// `sup_j |s_j|`, which equals `max(|limit|, max_j |terms_j|)`.
    pub fn sup_norm(&self, precision: u32) -> NormInterval {
        sup_modulus(self.terms.iter().chain(std::iter::once(&self.limit)), precision)
    }
}

/// Realizes a coordinate vector of `c` as a sequence: term `j` equals
/// `x_1 + x_{j+1}`, the limit equals `x_1`.
pub fn c_space_embed(v: &CoordVector) -> ConvergentSequence {
    let limit = v.coordinate(1);
    let len = v.max_support().saturating_sub(1);
    let terms = (1..=len).map(|j| &limit + &v.coordinate(j + 1)).collect();
    ConvergentSequence { terms, limit }
}

impl Default for SpaceSpec {
    fn default() -> Self {
        SpaceSpec::l1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CoordVector {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn basis_vectors_and_coordinates() {
        assert_eq!(CoordVector::basis(1).unwrap(), v("{1: 1}"));
        assert_eq!(CoordVector::basis(0), Err(SpaceError::ZeroIndex));
        let e3 = CoordVector::basis(3).unwrap();
        assert_eq!(e3.coordinate(3), Scalar::one());
        assert_eq!(e3.coordinate(4), Scalar::zero());
        assert_eq!(v("{1: 2, 7: 1/3}").coordinate(7), Scalar::ratio(1, 3));
    }

    #[test]
    fn normalized_basis_in_every_space() {
        for space in [SpaceSpec::l1(), SpaceSpec::l2(), "lp:3/2".parse().unwrap(), SpaceSpec::c0(), SpaceSpec::c()] {
            for k in 1..=100 {
                let n = space.norm(&CoordVector::basis(k).unwrap());
                assert_eq!(n, Interval::point(Rational::one()), "{space} e_{k}");
            }
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(SpaceSpec::l1().norm(&v("{1: 1, 2: -1/2}")), Interval::point(q("3/2")));
        assert_eq!(SpaceSpec::c0().norm(&CoordVector::zero()), Interval::zero());
        let root2 = SpaceSpec::l2().norm_with(&v("{1: 1, 2: 1}"), 20);
        assert!(&root2.lo * &root2.lo <= q("2") && q("2") <= &root2.hi * &root2.hi);
        assert!(root2.meets_width(20));
        assert!(!root2.is_point());
    }

    #[test]
    fn c_space_examples() {
        let e1 = c_space_embed(&v("{1: 1}"));
        assert!(e1.terms.is_empty());
        assert_eq!(e1.limit, Scalar::one());
        let d = c_space_embed(&v("{1: 1, 2: -1}"));
        assert_eq!(d.terms, vec![Scalar::zero()]);
        assert_eq!(d.limit, Scalar::one());
        assert_eq!(d.sup_norm(8), Interval::point(Rational::one()));
        let e2 = c_space_embed(&v("{2: 1}"));
        assert_eq!(e2.terms, vec![Scalar::one()]);
        assert_eq!(e2.limit, Scalar::zero());
        assert_eq!(SpaceSpec::c().norm(&v("{2: 1}")), Interval::point(Rational::one()));
        // cancellation in the first term, growth later
        assert_eq!(SpaceSpec::c().norm(&v("{1: -1, 2: 1, 3: -2}")), Interval::point(q("3")));
    }

    #[test]
    fn complex_sup_norm() {
        let n = SpaceSpec::c0().norm_with(&v("{1: 1+i, 2: 1}"), 24);
        assert!(&n.lo * &n.lo <= q("2") && q("2") <= &n.hi * &n.hi);
        assert!(n.meets_width(24));
    }

    #[test]
    fn fractional_exponent_norm_encloses() {
        // ‖(1, 1)‖_{3/2} = 2^(2/3)
        let space: SpaceSpec = "lp:3/2".parse().unwrap();
        let n = space.norm_with(&v("{1: 1, 2: 1}"), 30);
        let cube = |r: &Rational| r * r * r;
        assert!(cube(&n.lo) <= q("4") && q("4") <= cube(&n.hi));
        assert!(n.meets_width(30));
    }

    #[test]
    fn space_syntax() {
        for s in ["l1", "l2", "lp:3/2", "c0", "c", "l3"] {
            let sp: SpaceSpec = s.parse().unwrap();
            assert_eq!(sp.to_string(), s);
        }
        assert_eq!("lp:1".parse::<SpaceSpec>().unwrap().to_string(), "l1");
        assert!(matches!("lp:1/2".parse::<SpaceSpec>(), Err(SpaceError::ExponentBelowOne(_))));
        assert!("linf".parse::<SpaceSpec>().is_err());
        assert!("l2.5".parse::<SpaceSpec>().is_err());
    }

    #[test]
    fn vector_syntax() {
        let x = v("{1: 1/2, 4: -3}");
        assert_eq!(x.to_string(), "{1: 1/2, 4: -3}");
        assert_eq!(v("{}"), CoordVector::zero());
        assert_eq!(v("{3: 0}"), CoordVector::zero());
        assert!("{0: 1}".parse::<CoordVector>().is_err());
        assert!("{1: 1, 1: 2}".parse::<CoordVector>().is_err());
        assert!("1: 1".parse::<CoordVector>().is_err());
        assert!("{1: 0.5}".parse::<CoordVector>().is_err());
    }
}
