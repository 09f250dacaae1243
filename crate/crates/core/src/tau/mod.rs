//! τ-factorization: factorizations whose factors are pairwise related under a
//! symmetric relation τ, the τ-divisor graphs built from them, and bounded
//! falsifiers for the relation properties the theory depends on.
//!
//! Product τ-divisibility `y₁⋯y_k ∣_τ x` means the factors appear as a
//! consecutive run, positionally associate to `y₁,…,y_k`, in some
//! τ-factorization of `x`. Loops use the same rule with a repeated vertex.

mod computed;
mod declared;
mod properties;
mod relation;

use crate::complexes::DivisorGraph;

pub use computed::{
    build_tau_graphs, is_tau_factorization, is_tau_irreducible, single_vertex_iff_tau_irreducible,
    tau_divides, tau_factorization_representatives, tau_factorizations, tau_product_divides,
    ClassedTauFactorizations, SingleVertexCheck, TauFactorization, TauOracle,
};
pub use declared::{
    declared_is_tau_irreducible, declared_tau_divides, declared_tau_factorizations,
    declared_tau_graphs, declared_tau_product_divides, DeclaredTauOracle,
};
pub use properties::{
    condition_witness, is_associate_preserving, is_left_cancellative, is_left_multiplicative,
    is_refinable, is_right_cancellative, is_right_multiplicative, lemma_instance_check,
    tau_accp_probe, AccpVerdict, ConditionVariant, ConditionVerdict, PropertyVerdict,
};
pub use relation::{tau_related, BoundRelation, Predicate, TauRelation};

/// `Γ_τ(x)`, `G_τ(x)` and their loop-free reductions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauGraphs {
    pub directed: DivisorGraph,
    pub undirected: DivisorGraph,
    pub reduced_directed: DivisorGraph,
    pub reduced_undirected: DivisorGraph,
}

impl TauGraphs {
    pub(crate) fn from_pair(directed: DivisorGraph, undirected: DivisorGraph) -> Self {
        TauGraphs {
            reduced_directed: directed.reduced(),
            reduced_undirected: undirected.reduced(),
            directed,
            undirected,
        }
    }

    /// One vertex and no loop, in both graphs.
    pub fn is_single_loopless_vertex(&self) -> bool {
        self.directed.vertices.len() == 1 && self.directed.loops[0] == 0
    }
}
