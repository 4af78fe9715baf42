//! Maximum clique / maximum independent set laboratory.
//!
//! - [`graph`], [`indices`], [`dimacs`]: graphs, connectivity indices, file I/O
//! - [`qubo`]: independent-set / clique QUBO models and Ising conversion
//! - [`decompose`]: independent-set preserving graph reduction
//! - [`bench`]: planted-clique benchmark generator
//! - [`solvers`]: exact oracle, annealing sampler, repair, embedding gate
//! - [`stats`]: the statistical battery used to compare groups of runs
//! - [`harness`]: experiment plans, execution and report files

pub mod bench;
pub mod decompose;
pub mod dimacs;
pub mod graph;
pub mod harness;
pub mod indices;
pub mod qubo;
pub mod solvers;
pub mod stats;

pub use graph::{greedy_chromatic_upper_bound, Graph, GraphError, VertexSet};
