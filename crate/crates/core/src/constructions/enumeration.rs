use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalars::{Field, Rational, Scalar};
use crate::spaces::CoordVector;

/// Height of a rational: 0 for zero, otherwise `max(|p|, q)` in lowest terms.
pub fn rational_height(r: &Rational) -> u64 {
    if r.is_zero() {
        return 0;
    }
    let p = r.numer().abs().to_u64().unwrap_or(u64::MAX);
    let q = r.denom().to_u64().unwrap_or(u64::MAX);
    p.max(q)
}

pub fn scalar_height(s: &Scalar) -> u64 {
    rational_height(&s.re()).max(rational_height(&s.im()))
}

/// `max(max_support, heights of the coordinates)`; 0 only for the zero vector.
pub fn vector_height(v: &CoordVector) -> u64 {
    v.iter()
        .map(|(_, x)| scalar_height(x))
        .fold(v.max_support() as u64, u64::max)
}

/// All scalars of height `≤ h`, sorted by `(height, re, im)`.
#[derive(Debug)]
struct Level {
    items: Vec<Scalar>,
    pos: HashMap<Scalar, usize>,
}

fn rationals_up_to(h: u64) -> Vec<Rational> {
    let h = h as i64;
    let mut out = vec![Rational::zero()];
    for q in 1..=h.max(0) {
        for p in -h..=h {
            if p != 0 && p.gcd(&q) == 1 {
                out.push(Rational::new(BigInt::from(p), BigInt::from(q)));
            }
        }
    }
    out
}

impl Level {
    fn build(field: Field, h: u64) -> Level {
        let reals = rationals_up_to(h);
        let mut items: Vec<Scalar> = match field {
            Field::Real => reals.into_iter().map(Scalar::Real).collect(),
            Field::Complex => reals
                .iter()
                .flat_map(|a| reals.iter().map(move |b| Scalar::complex(a.clone(), b.clone())))
                .collect(),
        };
        items.sort_by(|a, b| {
            (scalar_height(a), a.re(), a.im()).cmp(&(scalar_height(b), b.re(), b.im()))
        });
        let pos = items.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Level { items, pos }
    }
}

/// A fixed bijection `m ↦ y^(m)` from the positive integers onto the finitely
/// supported vectors with rational (or Gaussian-rational) coordinates.
///
/// Vectors are ordered by height and, within one height `h`, lexicographically
/// by their coordinate tuple `(x_1, …, x_h)`, each coordinate ranked by its
/// position in the `(height, re, im)` ordering of scalars of height `≤ h`.
/// There are exactly `c(h)^h` vectors of height `≤ h`, where `c(h)` counts the
/// scalars of height `≤ h`, so `y^(1)` is the zero vector and ranking and
/// unranking are closed-form mixed-radix computations.
#[derive(Debug)]
pub struct DenseEnumeration {
    field: Field,
    levels: RwLock<Vec<Arc<Level>>>,
}

impl Clone for DenseEnumeration {
    fn clone(&self) -> Self {
        DenseEnumeration::new(self.field)
    }
}

impl DenseEnumeration {
    pub fn new(field: Field) -> Self {
        DenseEnumeration {
            field,
            levels: RwLock::new(Vec::new()),
        }
    }

    pub fn real() -> Self {
        DenseEnumeration::new(Field::Real)
    }

    pub fn complex() -> Self {
        DenseEnumeration::new(Field::Complex)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn level(&self, h: u64) -> Arc<Level> {
        let h = h as usize;
        if let Some(l) = self.levels.read().expect("level cache poisoned").get(h) {
            return Arc::clone(l);
        }
        let mut levels = self.levels.write().expect("level cache poisoned");
        while levels.len() <= h {
            let next = levels.len() as u64;
            levels.push(Arc::new(Level::build(self.field, next)));
        }
        Arc::clone(&levels[h])
    }

    fn count(&self, h: u64) -> BigUint {
        BigUint::from(self.level(h).items.len())
    }

    /// Number of vectors of height `≤ h`.
    fn cumulative(&self, h: u64) -> BigUint {
        self.count(h).pow(h as u32)
    }

    /// The `m`-th element, `m ≥ 1`.
    pub fn element(&self, m: u64) -> CoordVector {
        assert!(m >= 1, "enumeration is 1-based");
        let mut rank = BigUint::from(m - 1);
        let mut h = 0u64;
        while rank >= self.cumulative(h) {
            h += 1;
        }
        if h == 0 {
            return CoordVector::zero();
        }
        rank -= self.cumulative(h - 1);

        let level = self.level(h);
        let c = BigUint::from(level.items.len());
        let cl = self.level(h - 1).items.len();
        let cl_big = BigUint::from(cl);
        let hh = h as usize;
        let mut in_lower = true;
        let mut coords = Vec::with_capacity(hh);
        for i in 1..=hh {
            let rest = (hh - i) as u32;
            let full = c.pow(rest);
            let lower_tail = if i < hh {
                cl_big.pow(rest - 1)
            } else {
                BigUint::one()
            };
            let mut chosen = None;
            for v in 0..level.items.len() {
                let lower_here = in_lower && if i < hh { v < cl } else { v == 0 };
                let exact = if lower_here { &full - &lower_tail } else { full.clone() };
                if rank < exact {
                    chosen = Some(v);
                    in_lower = lower_here;
                    break;
                }
                rank -= exact;
            }
            let v = chosen.expect("rank within level");
            coords.push(level.items[v].clone());
        }
        CoordVector::from_dense(&coords)
    }

    /// Inverse of [`element`](Self::element). `None` if the vector is outside
    /// the enumerated field or its index does not fit in `u64`.
    pub fn index_of(&self, v: &CoordVector) -> Option<u64> {
        if self.field == Field::Real && v.field() == Field::Complex {
            return None;
        }
        let h = vector_height(v);
        if h == 0 {
            return Some(1);
        }
        if h > 64 {
            return None;
        }
        let level = self.level(h);
        let cl = self.level(h - 1).items.len();
        let c = BigUint::from(level.items.len());
        let cl_big = BigUint::from(cl);
        let hh = h as usize;

        let mut full_rank = BigUint::zero();
        let mut lower_before = BigUint::zero();
        let mut in_lower = true;
        for i in 1..=hh {
            let p = *level.pos.get(&v.coordinate(i))?;
            full_rank = full_rank * &c + BigUint::from(p);
            if in_lower {
                let (less, mult) = if i < hh {
                    (p.min(cl), cl_big.pow((hh - 1 - i) as u32))
                } else {
                    (usize::from(p > 0), BigUint::one())
                };
                lower_before += BigUint::from(less) * mult;
                in_lower = if i < hh { p < cl } else { p == 0 };
            }
        }
        let index = self.cumulative(h - 1) + full_rank - lower_before + 1u32;
        index.to_u64()
    }

    /// The first `count` elements.
    pub fn take(&self, count: usize) -> Vec<CoordVector> {
        (1..=count as u64).map(|m| self.element(m)).collect()
    }
}
