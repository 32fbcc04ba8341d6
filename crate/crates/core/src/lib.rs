//! Differentially private approximate Gomory-Hu trees.
//!
//! The crate is layered bottom-up:
//!
//! * [`graph`]: immutable weighted graphs, cut weights and contraction.
//! * [`exact`]: max-flow, exact isolating cuts, exact Gomory-Hu trees and
//!   brute-force oracles.
//! * [`privacy`]: ε, seedable noise streams and the budget ledger.
//! * [`private_cuts`]: private minimum `s`-`t` / `S`-`T` cuts and private
//!   minimum isolating cuts.
//! * [`gh_private`]: the recursive private tree construction.
//! * [`applications`]: pairwise queries, global min cut and minimum k-cut
//!   on top of any tree.
//! * [`harness`]: file formats, instance generators and the experiment
//!   runner behind the `ghtree` binary.

pub mod applications;
pub mod error;
pub mod exact;
pub mod gh_private;
pub mod graph;
pub mod harness;
pub mod privacy;
pub mod private_cuts;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{CutSide, Graph, GraphBuilder, Vertex, VertexSet};
pub use privacy::{Epsilon, NoiseRng, PrivacyLedger};
pub use tree::SteinerTree;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/privacy.md")]
    mod privacy {}
    #[doc = include_str!("../../../book/src/private-cuts.md")]
    mod private_cuts {}
    #[doc = include_str!("../../../book/src/private-tree.md")]
    mod private_tree {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
