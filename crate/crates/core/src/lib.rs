//! Seeded PageRank localization on graphs with rank-skewed degrees.
//!
//! - [`graph`], [`io`]: compressed adjacency, edge-list parsing, binary cache.
//! - [`degseq`]: rank-skewed degree sequences, graphicality, exponent fitting.
//! - [`graphgen`]: Chung-Lu and exact-degree random graphs.
//! - [`solver`]: Gauss–Southwell with an exact argmax, plus a power-series reference.
//! - [`localization`]: minimal nonzeros for ε accuracy in four norms.
//! - [`bounds`]: nonzero-count bounds and fill-in audits.
//! - [`bipartite`]: closed forms on complete-bipartite graphs.

pub mod bipartite;
pub mod bounds;
pub mod degseq;
pub mod error;
pub mod graph;
pub mod graphgen;
pub mod io;
pub mod localization;
pub mod solver;
pub mod sparse;

pub use degseq::DegreeSequence;
pub use error::{Error, Result};
pub use graph::Graph;
pub use localization::Norm;
pub use solver::PprProblem;
pub use sparse::SparseVector;
