//! Exact minimal vertex covers and maximizing well-orders for hypergraphs
//! whose edges are finite or eventually periodic sets of naturals.

pub mod cover;
pub mod epset;
pub mod harness;
pub mod hypergraph;
pub mod stepping;
pub mod wellorder;

pub use cover::{
    brute_minimal_covers, brute_minimal_covers_bounded, find_witness, is_cover, minimalize,
    CertificateError, CoverError, WitnessedCover,
};
pub use epset::{BoolOp, Card, EpSet, EpSetError};
pub use hypergraph::{is_shrink, CheckOutcome, Hypergraph, HypergraphError, Restriction, Selector};
pub use stepping::{
    build_closure_chain, default_seeds, is_good_cut, layered_cover, layered_order, multiplicity,
    pairwise_transversal, prefix_unions, r_closure, two_tier_cover, BruteSolver, CoverSolver, Cut,
    Hypothesis, MaxWoSolver, OrderBuilder, StepError,
};
pub use wellorder::{
    build_maximizing, disjointify, klimo_extract, subsystems, Block, BlockOrder, InnerOrder,
    OrderError,
};
