//! Min-eccentricity and min-radius approximation for DAGs.
//!
//! [`certify_eccentricities`] splits the topological order into consecutive
//! intervals, certifies each interval from outside with set searches, and
//! recurses inside each interval with one less level of slack. The searches in
//! [`search`] turn the certifier into per-vertex estimates and a radius bound.

mod certify;
mod partition;
mod search;

pub use certify::{
    certify_eccentricities, find_certified_subset, find_certified_subset_reversed, Certification,
    CertifiedSubset, SearchCounters, Verdict,
};
pub use partition::{ck, choose_partition, PartitionPlan, PartitionStrategy};
pub use search::{
    approx_min_eccentricities, approx_min_radius, Bound, EccentricityEstimates, RadiusEstimate,
    RadiusTermination,
};
