use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;

/// A closed interval `[lo, hi]` of nonnegative rationals enclosing some real
/// quantity (a modulus or a norm).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(r: Rational) -> Self {
        Interval {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    /// `width ≤ 2^-precision · max(hi, 1)`.
    pub fn meets_width(&self, precision: u32) -> bool {
        let scale = if self.hi > Rational::one() {
            self.hi.clone()
        } else {
            Rational::one()
        };
        self.width() * pow2(precision) <= scale
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Multiplication by a nonnegative rational.
    pub fn scale(&self, k: &Rational) -> Interval {
        debug_assert!(!k.is_negative());
        Interval::new(&self.lo * k, &self.hi * k)
    }

    /// Rounds the endpoints outward onto the grid `2^-bits · ℤ`. Points are kept.
    pub fn outward(&self, bits: u32) -> Interval {
        if self.is_point() {
            return self.clone();
        }
        Interval::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.lo.to_string(), self.hi.to_string()].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(deserializer)?;
        let lo = super::parse_rational(&lo).map_err(serde::de::Error::custom)?;
        let hi = super::parse_rational(&hi).map_err(serde::de::Error::custom)?;
        if lo > hi {
            return Err(serde::de::Error::custom("inverted interval"));
        }
        Ok(Interval { lo, hi })
    }
}

pub(crate) fn pow2(bits: u32) -> Rational {
    Rational::from_integer(BigInt::one() << bits as usize)
}

/// Largest multiple of `2^-bits` that is `≤ r`.
pub fn floor_dyadic(r: &Rational, bits: u32) -> Rational {
    let scaled = r * pow2(bits);
    Rational::new(scaled.floor().to_integer(), BigInt::one() << bits as usize)
}

/// Smallest multiple of `2^-bits` that is `≥ r`.
pub fn ceil_dyadic(r: &Rational, bits: u32) -> Rational {
    let scaled = r * pow2(bits);
    Rational::new(scaled.ceil().to_integer(), BigInt::one() << bits as usize)
}

fn to_biguint(i: &BigInt) -> BigUint {
    debug_assert!(i.sign() != Sign::Minus);
    i.magnitude().clone()
}

/// Small primes used to reject non-powers before taking a big integer root.
const RESIDUE_PRIMES: [u32; 16] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 61];

fn pow_mod(base: u64, exp: u32, p: u64) -> u64 {
    (0..exp).fold(1, |acc, _| acc * base % p)
}

/// `x^(1/n)` when `x` is a perfect `n`-th power.
fn exact_root(x: &BigUint, n: u32) -> Option<BigUint> {
    if x.is_zero() || x.is_one() {
        return Some(x.clone());
    }
    let twos = x.trailing_zeros().unwrap_or(0);
    if !twos.is_multiple_of(u64::from(n)) {
        return None;
    }
    let odd = x >> twos as usize;
    // An n-th power is an n-th power residue modulo every prime.
    for p in RESIDUE_PRIMES {
        let p = u64::from(p);
        let r = (&odd % p).to_u64().expect("residue below p");
        if !(0..p).any(|y| pow_mod(y, n, p) == r) {
            return None;
        }
    }
    let root = odd.nth_root(n);
    (root.pow(n) == odd).then(|| root << (twos / u64::from(n)) as usize)
}

/// Certified enclosure of `r^(1/n)` for `r ≥ 0`, width at most `2^-bits`.
///
/// The result is a point exactly when `r` is a perfect `n`-th power in ℚ.
/// Otherwise, with `r = a/b`, the integer root `s` of `⌊a·2^(n·bits)/b⌋`
/// gives `s·2^-bits ≤ r^(1/n) < (s+1)·2^-bits`.
pub fn nth_root_interval(r: &Rational, n: u32, bits: u32) -> Interval {
    assert!(n >= 1, "root index must be positive");
    assert!(!r.is_negative(), "root of a negative rational");
    if r.is_zero() || n == 1 {
        return Interval::point(r.clone());
    }
    let a = to_biguint(r.numer());
    let b = to_biguint(r.denom());
    if let Some(num) = exact_root(&a, n) {
        if let Some(den) = exact_root(&b, n) {
            return Interval::point(Rational::new(BigInt::from(num), BigInt::from(den)));
        }
    }
    let scaled = (a << (n as usize * bits as usize)) / b;
    let s = scaled.nth_root(n);
    let den = BigInt::one() << bits as usize;
    let lo = Rational::new(BigInt::from(s.clone()), den.clone());
    let hi = Rational::new(BigInt::from(s + 1u32), den);
    Interval::new(lo, hi)
}

/// `gcd`-reduced form of the exponent `num/den`.
pub(crate) fn reduce_exponent(num: u64, den: u64) -> (u64, u64) {
    let g = num.gcd(&den);
    (num / g, den / g)
}
