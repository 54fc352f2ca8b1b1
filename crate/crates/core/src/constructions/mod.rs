//! The constructive objects behind chaoticity: a dense enumeration of targets,
//! the orbit schedule, finitely supported prefixes of a hypercyclic vector
//! with their orbit visits, and exact periodic points.

mod enumeration;
mod orbit;
mod periodic;
mod schedule;

pub use enumeration::{rational_height, scalar_height, vector_height, DenseEnumeration};
pub use orbit::{hypercyclic_prefix, orbit_visit, HypercyclicPrefix, OrbitVisit};
pub use periodic::{periodic_fixpoint_check, periodic_point, periodic_point_distance, PeriodicDistance, PeriodicPoint};
pub use schedule::{
    build_schedule, schedule_from_enumeration, target_metadata, Schedule, TargetMetadata, DEFAULT_SEARCH_CAP,
    TARGET_BITS,
};

use thiserror::Error;

use crate::operators::WeightError;
use crate::scalars::Field;
use crate::spaces::CoordVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no admissible n_{m} within {cap} candidates; the weights grow too slowly for target {m}")]
    ScheduleExhausted { m: usize, cap: usize },
    #[error("index {m} is outside 1..={len}")]
    IndexOutOfRange { m: usize, len: usize },
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("period N = {period} is below max_support(y) = {support}")]
    PeriodTooShort { period: usize, support: usize },
    #[error("fixpoint check needs at least 2 blocks, got {0}")]
    TooFewBlocks(usize),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// `y^(m)` of the enumeration over `field`.
pub fn enumerate_dense(field: Field, m: u64) -> CoordVector {
    DenseEnumeration::new(field).element(m)
}
