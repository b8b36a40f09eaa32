//! Instance generators: seeded random DAGs, tripartite triangle instances, and
//! the reduction from triangle detection to min-radius with its two gadgets.

mod gadgets;
mod random;
mod reduction;
mod triangle;

pub use gadgets::{gen_connectivity_gadget, gen_dag_gadget, ConnectivityGadget, DagGadget};
pub use random::{gen_connected_dag, gen_random_dag};
pub use reduction::{
    choose_t, reduce_triangle_to_minradius, Layer, LayerMap, Part, ReductionInstance, SourceVertex,
};
pub use triangle::{gen_triangle_free, gen_triangle_instance, has_triangle_bruteforce, TriangleInstance};
