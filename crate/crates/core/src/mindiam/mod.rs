//! Min-diameter approximation for unweighted DAGs.
//!
//! For a guess `D'`, every vertex gets a few nearby vertices on each side
//! ([`build_near_sets`]); a small covering set hits the sets that ran into
//! their size cap, and searches from it relay the far pairs. Pairs joined
//! through a shared near vertex are marked directly. Any unmarked pair proves
//! `D > D'`; otherwise `D <= ceil(3D'/2)`.

mod certify;
mod hitting_set;
mod near_sets;
mod pair_marks;
mod search;

pub use certify::{
    certify_min_diameter, certify_min_diameter_with_marks, DiameterCertification, DiameterStats,
    DiameterVerdict,
};
pub use hitting_set::{greedy_hitting_set, CoveringSet};
pub use near_sets::{build_near_sets, near_set_cap, NearSetFamily};
pub use pair_marks::{sparse_pair_product, PairMarks};
pub use search::{
    approx_min_diameter, choose_epsilon, choose_epsilon_pragmatic, DiameterEstimate, EpsilonChoice,
    ALPHA, BETA,
};
