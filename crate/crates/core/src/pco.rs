//! Completion with strictly positive costs on incomparable pairs.
//!
//! Every edge of the cocomparability graph is an incomparable pair, and
//! any ranking pays at least 1 for it, so more than `k` edges already
//! rules out a solution of cost `k`. Otherwise the instance goes to the
//! single-solution program.

use crate::error::{Error, Result};
use crate::orders::{CostInstance, LinearOrder};
use crate::single::{dp_schedule, solve_on_schedule, SolveOptions};
use crate::width::{
    cocomparability_graph, consistent_path_decomposition_with, ConsistentPathDecomposition,
};

/// A cost instance whose incomparable pairs cost at least 1 both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcoInstance(CostInstance);

impl PcoInstance {
    pub fn new(instance: CostInstance) -> Result<Self> {
        if !instance.is_pco() {
            return Err(Error::input(
                "some incomparable pair has zero cost in one direction",
            ));
        }
        Ok(PcoInstance(instance))
    }

    pub fn instance(&self) -> &CostInstance {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub enum Preprocessed {
    Proceed(Box<ConsistentPathDecomposition>),
    /// More incomparable pairs than the budget.
    Reject {
        edges: usize,
    },
}

pub fn pco_preprocess(inst: &PcoInstance, k: u64, options: &SolveOptions) -> Result<Preprocessed> {
    let edges = cocomparability_graph(inst.0.base()).edge_count();
    if edges as u64 > k {
        return Ok(Preprocessed::Reject { edges });
    }
    let cpd = consistent_path_decomposition_with(inst.0.base(), options.strategy)?;
    Ok(Preprocessed::Proceed(Box::new(cpd)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcoAnswer {
    Yes {
        ranking: LinearOrder,
        cost: u64,
    },
    /// Rejected by the edge count before solving.
    RejectedByEdges {
        edges: usize,
    },
    /// Solved; the optimum exceeds the budget.
    AboveBudget {
        optimum: u64,
    },
}

impl PcoAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, PcoAnswer::Yes { .. })
    }
}

pub fn solve_pco(inst: &PcoInstance, k: u64) -> Result<PcoAnswer> {
    solve_pco_with(inst, k, &SolveOptions::default())
}

pub fn solve_pco_with(inst: &PcoInstance, k: u64, options: &SolveOptions) -> Result<PcoAnswer> {
    match pco_preprocess(inst, k, options)? {
        Preprocessed::Reject { edges } => Ok(PcoAnswer::RejectedByEdges { edges }),
        Preprocessed::Proceed(cpd) => {
            let sol = solve_on_schedule(&inst.0, dp_schedule(&cpd.decomposition), options)?;
            if sol.cost <= k {
                Ok(PcoAnswer::Yes {
                    ranking: sol.ranking,
                    cost: sol.cost,
                })
            } else {
                Ok(PcoAnswer::AboveBudget { optimum: sol.cost })
            }
        }
    }
}
