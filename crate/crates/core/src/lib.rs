//! Reconstruction of undirected simple graphs from their common-neighbors
//! matrix (the square of the adjacency matrix), optionally helped by a
//! partial list of known edges and non-edges.
//!
//! The pipeline combines four stages:
//!
//! 1. [`topo`]: sound inference rules driven to a fixpoint,
//! 2. [`spectral`]: greedy sign assignment over the eigenvectors of G²,
//!    pulled toward the cells the rules already know,
//! 3. targeted error forgetting, which reopens rows whose common-neighbor
//!    counts disagree with G²,
//! 4. [`cosquare`]: exhaustive completion of the remaining ambiguous
//!    components.
//!
//! [`pipeline::run_pipeline`] chains them; [`metrics::evaluate`] scores the
//! result against a ground truth.

mod bits;
pub mod cli;
pub mod cosquare;
pub mod error;
pub mod graph;
pub mod io;
pub mod knowledge;
pub mod metrics;
pub mod oracle;
pub mod pipeline;
pub mod spectral;
pub mod topo;
pub mod tristate;

pub use error::{ReconError, Result};
pub use graph::{square, BinaryGraph, CommonNeighborsMatrix};
pub use knowledge::{sample_knowledge, KnowledgeSet};
pub use oracle::cosquare_oracle;
pub use tristate::{finalize, init_partial, Cell, TriStateAdjacency};
