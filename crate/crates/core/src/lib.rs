//! Kemeny rank aggregation over partial votes, solved exactly by dynamic
//! programming over path decompositions of the cocomparability graph of the
//! votes' unanimity order.

pub mod diverse;
pub mod error;
pub mod instances;
pub mod oracle;
pub mod orders;
pub mod pco;
pub mod set;
pub mod single;
pub mod width;

pub use diverse::{
    find_distinct_optima, solve_diverse, solve_diverse_with, solve_max_diversity, DiverseMode,
    DiverseOutcome, DiverseQuery, FailedConstraint,
};
pub use error::{Error, Result};
pub use orders::{
    diversity, kemeny_score, kt_distance, kt_distance_linear, reduce_to_co, transitive_closure,
    unanimity_order, CandidateSet, CostInstance, LinearOrder, PartialOrder, Profile, Relation,
};
pub use pco::{solve_pco, PcoAnswer, PcoInstance};
pub use set::VertexSet;
pub use single::{solve_single, solve_single_with, SingleSolution, SolveOptions};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/votes.md")]
    mod votes {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/single.md")]
    mod single {}
    #[doc = include_str!("../../../book/src/diverse.md")]
    mod diverse {}
    #[doc = include_str!("../../../book/src/pco.md")]
    mod pco {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
}
