use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Relation};
use crate::operators::ShiftOperator;
use crate::scalars::{rational_string, Rational};
use crate::spaces::{CoordVector, NormInterval, SpaceSpec};

use super::{ConstructionError, Schedule};

/// `x_M = Σ_{j≤M} B^{n_j} y^(j)` together with a certified bound on the norm of
/// the omitted series tail `Σ_{j>M} B^{n_j} y^(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypercyclicPrefix {
    pub schedule: Schedule,
    /// `B^{n_j} y^(j)` for `j = 1..M`.
    pub summands: Vec<CoordVector>,
    pub vector: CoordVector,
    /// `T(M + 1)`.
    #[serde(with = "rational_string")]
    pub tail_bound: Rational,
    /// `‖B^{n_1} y^(1)‖`, reported but not certified.
    pub first_summand_norm: NormInterval,
    /// Summand bounds for `j ≥ 2` and support separation of consecutive summands.
    pub certificates: Vec<Certificate>,
}

impl HypercyclicPrefix {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn disjoint_supports(&self) -> bool {
        self.summands
            .iter()
            .enumerate()
            .all(|(i, a)| self.summands[i + 1..].iter().all(|b| a.disjoint(b)))
    }
}

/// Builds `x_M` from the first `M` steps of `schedule`.
pub fn hypercyclic_prefix(
    op: &ShiftOperator,
    schedule: &Schedule,
    m_count: usize,
) -> Result<HypercyclicPrefix, ConstructionError> {
    if m_count == 0 || m_count > schedule.len() {
        return Err(ConstructionError::IndexOutOfRange {
            m: m_count,
            len: schedule.len(),
        });
    }
    let weights = op.weights();
    let tail_bound = weights.reciprocal_tail(m_count + 1)?;
    let summands: Vec<CoordVector> = (1..=m_count)
        .map(|j| op.right_inverse_power(schedule.n(j), schedule.target(j)))
        .collect();
    let vector: CoordVector = summands.iter().cloned().sum();

    let mut certificates = Vec::new();
    for j in 2..=m_count {
        certificates.push(
            Certificate::compare(
                format!("prefix.summand[{j}]"),
                format!("||B^(n_{j}) y^({j})|| <= |w_{j}|^-1 in {}", op.space()),
                op.norm(&summands[j - 1]).hi,
                Relation::Le,
                weights.reciprocal_modulus_upper(j),
            )
            .with("j", j)
            .with("space", op.space()),
        );
    }
    for j in 1..m_count {
        let (a, b) = (&summands[j - 1], &summands[j]);
        if let (Some(last), Some(first)) = (a.support().last(), b.support().next()) {
            certificates.push(
                Certificate::compare(
                    format!("prefix.separated[{j}]"),
                    format!("supp B^(n_{j}) y^({j}) lies below supp B^(n_{}) y^({})", j + 1, j + 1),
                    Rational::from_integer(first.into()),
                    Relation::Gt,
                    Rational::from_integer(last.into()),
                )
                .with("j", j),
            );
        }
    }

    Ok(HypercyclicPrefix {
        schedule: schedule.truncated(m_count),
        first_summand_norm: op.norm(&summands[0]),
        summands,
        vector,
        tail_bound,
        certificates,
    })
}

/// `A^{n_m} x_M` compared against its exact decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitVisit {
    pub m: usize,
    pub n_m: usize,
    pub image: CoordVector,
    /// `image − y^(m)`.
    pub residual: CoordVector,
    /// `Σ_{j=m+1}^{M} ub(|w_j|^-1) + T(M + 1)`.
    #[serde(with = "rational_string")]
    pub bound: Rational,
    pub residual_norm: NormInterval,
    pub certificates: Vec<Certificate>,
}

impl OrbitVisit {
    /// The residual-bound certificate in another space. The bound does not
    /// depend on the space because every basis here is normalized.
    pub fn residual_certificate(&self, space: &SpaceSpec) -> (NormInterval, Certificate) {
        let norm = space.norm(&self.residual);
        let cert = Certificate::compare(
            format!("orbit.residual[{}]", self.m),
            format!("||A^(n_{m}) x_M - y^({m})|| <= sum_(j>{m}) |w_j|^-1 + T(M+1) in {space}", m = self.m),
            norm.hi.clone(),
            Relation::Le,
            self.bound.clone(),
        )
        .with("m", self.m)
        .with("space", space);
        (norm, cert)
    }

    pub fn passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }
}

/// Applies `A^{n_m}` to `x_M` and certifies the decomposition
/// `A^{n_m} x_M = y^(m) + Σ_{j>m} B^{n_j - n_m} y^(j)` term by term, together with
/// the residual bound in the operator's space.
pub fn orbit_visit(
    op: &ShiftOperator,
    prefix: &HypercyclicPrefix,
    m: usize,
) -> Result<OrbitVisit, ConstructionError> {
    let len = prefix.len();
    if m == 0 || m > len {
        return Err(ConstructionError::IndexOutOfRange { m, len });
    }
    let schedule = &prefix.schedule;
    let weights = op.weights();
    let n_m = schedule.n(m);
    let image = op.power(n_m, &prefix.vector);
    let target = schedule.target(m);

    let mut certificates = Vec::new();
    for j in 1..m {
        certificates.push(
            Certificate::compare(
                format!("orbit.annihilate[{j},{m}]"),
                format!("A^(n_{m}) B^(n_{j}) y^({j}) == 0"),
                op.power(n_m, &prefix.summands[j - 1]),
                Relation::Eq,
                CoordVector::zero(),
            )
            .with("j", j)
            .with("m", m),
        );
    }
    let mut expected = target.clone();
    let mut bound = prefix.tail_bound.clone();
    for j in m + 1..=len {
        let later = op.right_inverse_power(schedule.n(j) - n_m, schedule.target(j));
        certificates.push(
            Certificate::compare(
                format!("orbit.decay[{j},{m}]"),
                format!("||B^(n_{j}-n_{m}) y^({j})|| <= |w_{j}|^-1 in {}", op.space()),
                op.norm(&later).hi,
                Relation::Le,
                weights.reciprocal_modulus_upper(j),
            )
            .with("j", j)
            .with("m", m)
            .with("space", op.space()),
        );
        expected = &expected + &later;
        bound += weights.reciprocal_modulus_upper(j);
    }
    certificates.push(
        Certificate::compare(
            format!("orbit.identity[{m}]"),
            format!("A^(n_{m}) x_M == y^({m}) + sum_(j>{m}) B^(n_j-n_{m}) y^(j)"),
            image.clone(),
            Relation::Eq,
            expected,
        )
        .with("m", m),
    );

    let residual = &image - target;
    let mut visit = OrbitVisit {
        m,
        n_m,
        image,
        residual,
        bound,
        residual_norm: NormInterval::zero(),
        certificates,
    };
    let (norm, cert) = visit.residual_certificate(op.space());
    visit.residual_norm = norm;
    visit.certificates.push(cert);
    Ok(visit)
}
