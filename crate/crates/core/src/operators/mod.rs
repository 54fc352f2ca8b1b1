//! Weighted backward shifts `(Ax)_k = w_k x_{k+1}`, their closed-form powers,
//! the right inverse `B`, and certification of the weight conditions.
//!
//! Operators act on finitely supported vectors only. Such vectors lie in the
//! domain of every power `A^n`, so each operation here is total and exact.

mod weights;

pub use weights::{TailRule, WeightConditions, WeightKind, WeightSequence, WeightViolation, TAIL_BITS};

use thiserror::Error;

use crate::scalars::ModulusInterval;
use crate::spaces::{CoordVector, NormInterval, SpaceSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("exponential base must satisfy |λ| > 1, got {0}")]
    BaseNotAboveOne(String),
    #[error("weight table is empty")]
    EmptyTable,
    #[error("weight w_{0} is zero")]
    ZeroWeight(usize),
    #[error("geometric tail ratio must satisfy |r| > 1, got {0}")]
    RatioNotAboveOne(String),
    #[error("claimed tail bound must be nonnegative, got {0}")]
    NegativeClaim(String),
    #[error("weight table has no tail rule, so the reciprocal tail is not computable")]
    TailNotComputable,
    #[error("malformed weights `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

impl WeightSequence {
    /// `(Ax)_k = w_k x_{k+1}`.
    pub fn apply_shift(&self, x: &CoordVector) -> CoordVector {
        let mut out = CoordVector::zero();
        for (k, v) in x.iter().filter(|&(k, _)| k >= 2) {
            out.insert_nonzero(k - 1, &self.weight(k - 1) * v);
        }
        out
    }

    /// `(A^n x)_k = [Π_{j=k}^{k+n-1} w_j] x_{k+n}`; `A^0` is the identity.
    pub fn apply_power(&self, n: usize, x: &CoordVector) -> CoordVector {
        if n == 0 {
            return x.clone();
        }
        let mut out = CoordVector::zero();
        for (k, v) in x.iter().filter(|&(k, _)| k > n) {
            out.insert_nonzero(k - n, &self.weight_product(k - n, n) * v);
        }
        out
    }

    /// `Bx = Σ_k w_k^-1 x_k e_{k+1}`, the right inverse of the shift.
    pub fn right_inverse(&self, x: &CoordVector) -> CoordVector {
        let mut out = CoordVector::zero();
        for (k, v) in x.iter() {
            let y = v.checked_div(&self.weight(k)).expect("weights are nonzero");
            out.insert_nonzero(k + 1, y);
        }
        out
    }

    /// `B^n x = Σ_k [Π_{j=k}^{k+n-1} w_j^-1] x_k e_{k+n}`.
    pub fn right_inverse_power(&self, n: usize, x: &CoordVector) -> CoordVector {
        if n == 0 {
            return x.clone();
        }
        let mut out = CoordVector::zero();
        for (k, v) in x.iter() {
            let y = v
                .checked_div(&self.weight_product(k, n))
                .expect("weights are nonzero");
            out.insert_nonzero(k + n, y);
        }
        out
    }
}

/// A weighted backward shift acting in a concrete sequence space.
#[derive(Debug, Clone)]
pub struct ShiftOperator {
    weights: WeightSequence,
    space: SpaceSpec,
}

/// `‖A^n e_{2n}‖` against `|w_n|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnboundednessWitness {
    pub n: usize,
    /// `e_{2n}`.
    pub witness: CoordVector,
    /// `A^n e_{2n} = [Π_{j=n}^{2n-1} w_j] e_n`.
    pub image: CoordVector,
    pub value: NormInterval,
    /// `|w_n|`.
    pub floor: ModulusInterval,
    /// `value.lo ≥ floor.hi`.
    pub certified: bool,
}

impl ShiftOperator {
    pub fn new(weights: WeightSequence, space: SpaceSpec) -> Self {
        ShiftOperator { weights, space }
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn with_space(&self, space: SpaceSpec) -> Self {
        ShiftOperator {
            weights: self.weights.clone(),
            space,
        }
    }

    pub fn norm(&self, v: &CoordVector) -> NormInterval {
        self.space.norm(v)
    }

    pub fn apply(&self, x: &CoordVector) -> CoordVector {
        self.weights.apply_shift(x)
    }

    pub fn power(&self, n: usize, x: &CoordVector) -> CoordVector {
        self.weights.apply_power(n, x)
    }

    pub fn right_inverse(&self, x: &CoordVector) -> CoordVector {
        self.weights.right_inverse(x)
    }

    pub fn right_inverse_power(&self, n: usize, x: &CoordVector) -> CoordVector {
        self.weights.right_inverse_power(n, x)
    }

    /// Evaluates `A^n` on `e_{2n}`; its norm grows at least like `|w_n|`.
    pub fn unboundedness_witness(&self, n: usize) -> UnboundednessWitness {
        assert!(n >= 1, "witness order must be positive");
        let witness = CoordVector::basis(2 * n).expect("2n >= 2");
        let image = self.weights.apply_power(n, &witness);
        let value = self.space.norm(&image);
        let floor = self.weights.weight(n).modulus_interval(self.space.precision());
        let certified = value.lo >= floor.hi;
        UnboundednessWitness {
            n,
            witness,
            image,
            value,
            floor,
            certified,
        }
    }
}
