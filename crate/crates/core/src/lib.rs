//! Min-distance parameters of weighted DAGs.
//!
//! The min-distance between two vertices is the shorter of the two directed
//! distances; in a DAG at most one of them is finite. This crate computes the
//! resulting eccentricities, radius and diameter exactly (all-pairs sweeps) and
//! approximately (interval certification for eccentricities and radius,
//! near-set covering with pair marking for the diameter), generates test and
//! hardness instances, and checks every approximation against the exact values.

pub mod dag;
pub mod error;
pub mod exact;
pub mod generators;
pub mod harness;
pub mod io;
pub mod mindiam;
pub mod minecc;
pub mod registry;

pub use dag::{Dag, Direction, Distance, SetDirection, VertexInterval};
pub use error::{Error, Result};
