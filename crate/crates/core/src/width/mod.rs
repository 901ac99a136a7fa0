//! Cocomparability graphs and order-consistent path decompositions.
//!
//! The decomposition pipeline: build the cocomparability graph, take a
//! minimal triangulation (an interval graph), drop the fill pairs from the
//! order to get an interval order, and lay the maximal cliques out along
//! that interval order.

mod chordal;
mod decomposition;
mod graph;

pub use chordal::{
    is_chordal, maximal_cliques, minimal_triangulation, minimalize_triangulation,
    perfect_elimination_order,
};
pub use decomposition::{
    consistent_path_decomposition, consistent_path_decomposition_with, exact_pathwidth,
    exact_pathwidth_with_cap, has_long_induced_cycle, interval_order_from_fill,
    layout_decomposition, make_nice, vertex_separation_layout, ConsistentPathDecomposition,
    DecompositionError, PathDecomposition, WidthStrategy, DEFAULT_EXACT_CAP, INDUCED_CYCLE_CAP,
    MAX_EXACT_CAP,
};
pub use graph::{cocomparability_graph, Graph};
