use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Relation};
use crate::operators::WeightSequence;
use crate::scalars::{rational_string, Rational, Scalar};
use crate::spaces::CoordVector;

use super::{ConstructionError, DenseEnumeration};

/// Precision for the modulus upper endpoints summed into `S` of a complex target.
pub const TARGET_BITS: u32 = 64;

/// Default number of candidates tried for each `n_m` before giving up.
pub const DEFAULT_SEARCH_CAP: usize = 10_000;

/// `k = max_support(y)` and `S ≥ Σ_k |y_k|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetMetadata {
    pub k: usize,
    #[serde(with = "rational_string")]
    pub s: Rational,
}

/// `(k, S)` for a target. `S` is exact for real vectors and a sum of certified
/// modulus upper endpoints otherwise.
pub fn target_metadata(y: &CoordVector) -> TargetMetadata {
    TargetMetadata {
        k: y.max_support(),
        s: y.iter().map(|(_, x)| x.modulus_interval(TARGET_BITS).hi).sum(),
    }
}

/// Exponents `n_1 < … < n_M` paired with targets `y^(1), …, y^(M)`, together
/// with one certificate per pair `j < m` and per condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub exponents: Vec<usize>,
    pub targets: Vec<CoordVector>,
    pub metadata: Vec<TargetMetadata>,
    pub certificates: Vec<Certificate>,
}

fn gap_floor(m: usize, k_j: usize) -> usize {
    m.max(k_j)
}

/// `|w_m|² · S_m²`.
fn product_target(weights: &WeightSequence, m: usize, s: &Rational) -> Rational {
    weights.weight(m).modulus_squared() * s * s
}

fn pair_certificates(
    weights: &WeightSequence,
    exponents: &[usize],
    meta: &[TargetMetadata],
    j: usize,
    m: usize,
) -> [Certificate; 3] {
    let (n_j, n_m) = (exponents[j - 1], exponents[m - 1]);
    let gap = n_m - n_j;
    let target = product_target(weights, m, &meta[m - 1].s);
    let floor = gap_floor(m, meta[j - 1].k);
    let gap_cert = Certificate::compare(
        format!("schedule.gap[{j},{m}]"),
        format!("n_{m} - n_{j} >= max({m}, k_{j})"),
        Scalar::from_integer(gap as i64),
        Relation::Ge,
        Scalar::from_integer(floor as i64),
    );
    let reduced = Certificate::compare(
        format!("schedule.product[{j},{m}]"),
        format!("|w_1 ... w_(n_{m}-n_{j})|^2 >= |w_{m}|^2 S_{m}^2"),
        weights.prefix_product(gap).modulus_squared(),
        Relation::Ge,
        target.clone(),
    );
    let full = Certificate::compare(
        format!("schedule.product_full[{j},{m}]"),
        format!("|w_1 ... w_(n_{m})|^2 >= |w_(n_{m}-n_{j}+1) ... w_(n_{m})|^2 |w_{m}|^2 S_{m}^2"),
        weights.prefix_product(n_m).modulus_squared(),
        Relation::Ge,
        weights.weight_product(gap + 1, n_j).modulus_squared() * target,
    );
    [gap_cert, reduced, full].map(|c| c.with("j", j).with("m", m))
}

/// Greedy minimal schedule: `n_1 = 1`, and each `n_m` is the least integer
/// above `n_{m-1}` with `n_m - n_j ≥ max(m, k_j)` and
/// `Π_{i≤n_m-n_j} |w_i| ≥ |w_m| S_m` for every `j < m`. At most `search_cap`
/// candidates are tried per step.
pub fn build_schedule(
    weights: &WeightSequence,
    targets: &[CoordVector],
    search_cap: usize,
) -> Result<Schedule, ConstructionError> {
    let metadata: Vec<TargetMetadata> = targets.iter().map(target_metadata).collect();
    let mut exponents: Vec<usize> = Vec::with_capacity(targets.len());
    for m in 1..=targets.len() {
        if m == 1 {
            exponents.push(1);
            continue;
        }
        let target = product_target(weights, m, &metadata[m - 1].s);
        let mut n = exponents
            .iter()
            .zip(&metadata)
            .map(|(n_j, meta)| n_j + gap_floor(m, meta.k))
            .max()
            .expect("m >= 2");
        let first = n;
        loop {
            let ok = target.is_zero()
                || exponents
                    .iter()
                    .all(|n_j| weights.prefix_product(n - n_j).modulus_squared() >= target);
            if ok {
                break;
            }
            if n - first >= search_cap {
                return Err(ConstructionError::ScheduleExhausted { m, cap: search_cap });
            }
            n += 1;
        }
        exponents.push(n);
    }

    let mut certificates = Vec::new();
    for m in 2..=targets.len() {
        for j in 1..m {
            certificates.extend(pair_certificates(weights, &exponents, &metadata, j, m));
        }
    }
    Ok(Schedule {
        exponents,
        targets: targets.to_vec(),
        metadata,
        certificates,
    })
}

/// [`build_schedule`] on the first `count` elements of an enumeration.
pub fn schedule_from_enumeration(
    weights: &WeightSequence,
    enumeration: &DenseEnumeration,
    count: usize,
    search_cap: usize,
) -> Result<Schedule, ConstructionError> {
    build_schedule(weights, &enumeration.take(count), search_cap)
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `n_m`, 1-based.
    pub fn n(&self, m: usize) -> usize {
        self.exponents[m - 1]
    }

    /// `y^(m)`, 1-based.
    pub fn target(&self, m: usize) -> &CoordVector {
        &self.targets[m - 1]
    }

    pub fn passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    /// The first `len` steps. The greedy choice of `n_m` depends only on earlier
    /// steps, so this is the schedule that would be built for `len` targets.
    pub fn truncated(&self, len: usize) -> Schedule {
        let len = len.min(self.len());
        let keep = |c: &Certificate| {
            c.context
                .get("m")
                .and_then(|m| m.parse::<usize>().ok())
                .is_some_and(|m| m <= len)
        };
        Schedule {
            exponents: self.exponents[..len].to_vec(),
            targets: self.targets[..len].to_vec(),
            metadata: self.metadata[..len].to_vec(),
            certificates: self.certificates.iter().filter(|c| keep(c)).cloned().collect(),
        }
    }

    /// Recomputes every pair condition from the weights and compares with the
    /// stored certificates.
    pub fn reverify(&self, weights: &WeightSequence) -> bool {
        let increasing = self.exponents.windows(2).all(|w| w[0] < w[1]);
        let metadata_ok = self
            .targets
            .iter()
            .zip(&self.metadata)
            .all(|(y, meta)| &target_metadata(y) == meta);
        let mut fresh = Vec::new();
        for m in 2..=self.len() {
            for j in 1..m {
                fresh.extend(pair_certificates(weights, &self.exponents, &self.metadata, j, m));
            }
        }
        increasing
            && metadata_ok
            && fresh == self.certificates
            && fresh.iter().all(|c| c.passed() && c.is_consistent())
    }
}
