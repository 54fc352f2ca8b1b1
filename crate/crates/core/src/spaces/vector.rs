use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::scalars::{Field, Scalar};

use super::SpaceError;

/// A finitely supported coordinate vector `x = Σ x_k e_k` relative to a
/// normalized Schauder basis. Indices are 1-based; zero coordinates are never
/// stored, so two vectors are equal iff they have the same support and values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CoordVector {
    coords: BTreeMap<usize, Scalar>,
}

impl CoordVector {
    pub fn zero() -> Self {
        CoordVector::default()
    }

    /// The basis vector `e_k`.
    pub fn basis(k: usize) -> Result<Self, SpaceError> {
        let mut v = CoordVector::zero();
        v.set(k, Scalar::one())?;
        Ok(v)
    }

    /// Builds a vector from `(index, value)` pairs; repeated indices are summed.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (usize, Scalar)>,
    {
        let mut v = CoordVector::zero();
        for (k, x) in pairs {
            let cur = v.coordinate(k);
            v.set(k, &cur + &x)?;
        }
        Ok(v)
    }

    /// Vector with `values[i]` at index `i + 1`.
    pub fn from_dense(values: &[Scalar]) -> Self {
        let coords = values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i + 1, x.clone()))
            .collect();
        CoordVector { coords }
    }

    pub fn set(&mut self, k: usize, x: Scalar) -> Result<(), SpaceError> {
        if k == 0 {
            return Err(SpaceError::ZeroIndex);
        }
        if x.is_zero() {
            self.coords.remove(&k);
        } else {
            self.coords.insert(k, x);
        }
        Ok(())
    }

    /// Insert at an index already known to be valid.
    pub(crate) fn insert_nonzero(&mut self, k: usize, x: Scalar) {
        debug_assert!(k >= 1);
        if !x.is_zero() {
            self.coords.insert(k, x);
        }
    }

    /// The coordinate functional `x ↦ x_k`; zero outside the support (and for `k = 0`).
    pub fn coordinate(&self, k: usize) -> Scalar {
        self.coords.get(&k).cloned().unwrap_or_default()
    }

    /// Largest index carrying a nonzero coordinate, 0 for the zero vector.
    pub fn max_support(&self) -> usize {
        self.coords.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.coords.len()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.coords.iter().map(|(&k, x)| (k, x))
    }

    pub fn field(&self) -> Field {
        if self.coords.values().any(|x| x.field() == Field::Complex) {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn scale(&self, alpha: &Scalar) -> CoordVector {
        if alpha.is_zero() {
            return CoordVector::zero();
        }
        let coords = self
            .coords
            .iter()
            .map(|(&k, x)| (k, x * alpha))
            .collect();
        CoordVector { coords }
    }

    /// Keeps only the coordinates with index in `1..=last`.
    pub fn truncate(&self, last: usize) -> CoordVector {
        let coords = self
            .coords
            .range(..=last)
            .map(|(&k, x)| (k, x.clone()))
            .collect();
        CoordVector { coords }
    }

    /// Whether the supports of `self` and `other` are disjoint.
    pub fn disjoint(&self, other: &CoordVector) -> bool {
        self.support().all(|k| !other.coords.contains_key(&k))
    }
}

impl Add for &CoordVector {
    type Output = CoordVector;
    fn add(self, rhs: &CoordVector) -> CoordVector {
        let mut out = self.clone();
        for (&k, x) in &rhs.coords {
            let sum = &out.coordinate(k) + x;
            out.insert_or_remove(k, sum);
        }
        out
    }
}

impl Sub for &CoordVector {
    type Output = CoordVector;
    fn sub(self, rhs: &CoordVector) -> CoordVector {
        let mut out = self.clone();
        for (&k, x) in &rhs.coords {
            let diff = &out.coordinate(k) - x;
            out.insert_or_remove(k, diff);
        }
        out
    }
}

impl Neg for &CoordVector {
    type Output = CoordVector;
    fn neg(self) -> CoordVector {
        let coords = self.coords.iter().map(|(&k, x)| (k, -x)).collect();
        CoordVector { coords }
    }
}

impl CoordVector {
    fn insert_or_remove(&mut self, k: usize, x: Scalar) {
        if x.is_zero() {
            self.coords.remove(&k);
        } else {
            self.coords.insert(k, x);
        }
    }
}

impl std::iter::Sum for CoordVector {
    fn sum<I: Iterator<Item = CoordVector>>(iter: I) -> Self {
        iter.fold(CoordVector::zero(), |acc, v| &acc + &v)
    }
}

impl fmt::Display for CoordVector {
    /// `{1: 1/2, 4: -3}`; the zero vector prints as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, x)) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {x}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as a JSON object `{"1": "1/2", "4": "-3"}`.
impl serde::Serialize for CoordVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.coords.iter().map(|(k, x)| (k.to_string(), x)))
    }
}

impl<'de> serde::Deserialize<'de> for CoordVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, Scalar>::deserialize(deserializer)?;
        let mut v = CoordVector::zero();
        for (k, x) in raw {
            let k: usize = k.parse().map_err(serde::de::Error::custom)?;
            v.set(k, x).map_err(serde::de::Error::custom)?;
        }
        Ok(v)
    }
}

impl FromStr for CoordVector {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| SpaceError::Parse {
            input: s.to_string(),
            reason,
        };
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| err("expected `{index: scalar, ...}`".into()))?;
        let mut v = CoordVector::zero();
        for entry in body.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (k, x) = entry
                .split_once(':')
                .ok_or_else(|| err(format!("entry `{entry}` lacks `:`")))?;
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index `{}`", k.trim())))?;
            if k == 0 {
                return Err(SpaceError::ZeroIndex);
            }
            if v.coords.contains_key(&k) {
                return Err(err(format!("duplicate index {k}")));
            }
            let x: Scalar = x.parse().map_err(|e| err(format!("{e}")))?;
            v.set(k, x)?;
        }
        Ok(v)
    }
}
