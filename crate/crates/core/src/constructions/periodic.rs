use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Relation};
use crate::operators::{ShiftOperator, WeightSequence};
use crate::scalars::{rational_string, Rational, Scalar};
use crate::spaces::{CoordVector, NormInterval, SpaceSpec};

use super::schedule::{target_metadata, TARGET_BITS};
use super::ConstructionError;

/// The prefix of an `N`-periodic point of the shift: head `x_1..x_N` followed
/// by `K` blocks, where `e_{kN+m}` carries `x_m · Π_{i=m}^{kN+m-1} w_i^-1`.
///
/// These coefficients are what `A^N x = x` forces: each block is the previous
/// one divided by `N` consecutive weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    head: Vec<Scalar>,
    blocks: usize,
    vector: CoordVector,
}

/// Builds the head and `blocks` tail blocks.
pub fn periodic_point(
    weights: &WeightSequence,
    head: Vec<Scalar>,
    blocks: usize,
) -> Result<PeriodicPoint, ConstructionError> {
    if head.is_empty() {
        return Err(ConstructionError::ZeroPeriod);
    }
    let pp = PeriodicPoint {
        vector: CoordVector::from_dense(&head),
        head,
        blocks: 0,
    };
    Ok(pp.extend(weights, blocks))
}

impl PeriodicPoint {
    pub fn period(&self) -> usize {
        self.head.len()
    }

    pub fn head(&self) -> &[Scalar] {
        &self.head
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// The materialized prefix, supported on `1..=(K+1)N`.
    pub fn vector(&self) -> &CoordVector {
        &self.vector
    }

    /// Number of materialized coordinates, `(K+1)N`.
    pub fn prefix_len(&self) -> usize {
        (self.blocks + 1) * self.period()
    }

    /// The coefficient of `e_index` in the full periodic point, materialized or not.
    pub fn coefficient(&self, weights: &WeightSequence, index: usize) -> Scalar {
        assert!(index >= 1, "basis indices start at 1");
        if index <= self.prefix_len() {
            return self.vector.coordinate(index);
        }
        let n = self.period();
        let m = (index - 1) % n + 1;
        let x = &self.head[m - 1];
        if x.is_zero() {
            return Scalar::zero();
        }
        x.checked_div(&weights.weight_product(m, index - m))
            .expect("weights are nonzero")
    }

    /// The same point with `blocks` tail blocks (never fewer than present).
    pub fn extend(&self, weights: &WeightSequence, blocks: usize) -> PeriodicPoint {
        let n = self.period();
        let mut vector = self.vector.clone();
        for k in self.blocks + 1..=blocks {
            for m in 1..=n {
                let prev = (k - 1) * n + m;
                let x = vector.coordinate(prev);
                if x.is_zero() {
                    continue;
                }
                let next = x
                    .checked_div(&weights.weight_product(prev, n))
                    .expect("weights are nonzero");
                vector.set(prev + n, next).expect("index >= 1");
            }
        }
        PeriodicPoint {
            head: self.head.clone(),
            blocks: blocks.max(self.blocks),
            vector,
        }
    }

    /// Coordinates `kN+1..=(k+1)N`; block 0 is the head.
    pub fn block(&self, k: usize) -> CoordVector {
        let n = self.period();
        CoordVector::from_pairs(
            self.vector
                .iter()
                .filter(|&(i, _)| i > k * n && i <= (k + 1) * n)
                .map(|(i, x)| (i, x.clone())),
        )
        .expect("indices are positive")
    }

    /// `‖block_k‖_1 ≤ [Σ_m |x_m|] · |w_{kN}|^-1` for `k = 1..K`.
    pub fn block_mass_certificates(&self, weights: &WeightSequence) -> Vec<Certificate> {
        let n = self.period();
        let head_mass = target_metadata(&CoordVector::from_dense(&self.head)).s;
        let l1 = SpaceSpec::l1();
        (1..=self.blocks)
            .map(|k| {
                let bound = &head_mass * weights.reciprocal_modulus_upper(k * n);
                // Norm widths are absolute below 1, so resolve down to the bound's scale.
                let scale = bound.denom().bits().saturating_sub(bound.numer().bits());
                let bits = TARGET_BITS + u32::try_from(scale).unwrap_or(u32::MAX - TARGET_BITS);
                Certificate::compare(
                    format!("periodic.block[{k}]"),
                    format!("||block {k}||_1 <= (sum |x_m|) |w_{}|^-1", k * n),
                    l1.norm_with(&self.block(k), bits).hi,
                    Relation::Le,
                    bound,
                )
                .with("N", n)
                .with("k", k)
            })
            .collect()
    }
}

/// `A^N` of the `K`-block prefix agrees with the prefix on `1..=KN`.
/// Fails (as an error certificate) when fewer than two blocks are present.
pub fn periodic_fixpoint_check(weights: &WeightSequence, pp: &PeriodicPoint) -> Certificate {
    let (n, k) = (pp.period(), pp.blocks());
    let name = format!("periodic.fixpoint[N={n},K={k}]");
    let claim = format!("A^{n} x == x on indices 1..{}", k * n);
    if k < 2 {
        return Certificate::error(name, claim, ConstructionError::TooFewBlocks(k))
            .with("N", n)
            .with("K", k);
    }
    let window = k * n;
    Certificate::compare(
        name,
        claim,
        weights.apply_power(n, pp.vector()).truncate(window),
        Relation::Eq,
        pp.vector().truncate(window),
    )
    .with("N", n)
    .with("K", k)
}

/// A periodic point whose head reproduces `y`, with the certified distance bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicDistance {
    pub point: PeriodicPoint,
    /// `S_y · T(N)`.
    #[serde(with = "rational_string")]
    pub bound: Rational,
    /// `‖x − y‖` for the materialized prefix `x`.
    pub distance: NormInterval,
    pub certificate: Certificate,
}

/// Builds the `N`-periodic point with head `y_1..y_N` and `blocks` tail blocks
/// and certifies `‖x − y‖ ≤ S_y · T(N)` for the materialized prefix.
pub fn periodic_point_distance(
    op: &ShiftOperator,
    y: &CoordVector,
    period: usize,
    blocks: usize,
) -> Result<PeriodicDistance, ConstructionError> {
    let support = y.max_support();
    if period == 0 {
        return Err(ConstructionError::ZeroPeriod);
    }
    if period < support {
        return Err(ConstructionError::PeriodTooShort { period, support });
    }
    let weights = op.weights();
    let head: Vec<Scalar> = (1..=period).map(|k| y.coordinate(k)).collect();
    let point = periodic_point(weights, head, blocks)?;
    let bound = target_metadata(y).s * weights.reciprocal_tail(period)?;
    let distance = op.norm(&(point.vector() - y));
    let certificate = Certificate::compare(
        format!("periodic.distance[N={period}]"),
        format!("||x - y|| <= S_y T({period}) in {}", op.space()),
        distance.hi.clone(),
        Relation::Le,
        bound.clone(),
    )
    .with("N", period)
    .with("K", blocks)
    .with("space", op.space());
    Ok(PeriodicDistance {
        point,
        bound,
        distance,
        certificate,
    })
}
