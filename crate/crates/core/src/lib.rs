//! Approximate Turing kernels for graph problems parameterized by treewidth.
//!
//! A kernel repeatedly locates a piece of the input through a tree
//! decomposition, solves that piece with a size-bounded oracle and recurses on
//! the rest. All oracle traffic goes through [`oracle::Oracle`], so the same
//! engines run against exact, degraded or audited oracles.

pub mod approx;
pub mod error;
pub mod exact;
pub mod friendly;
pub mod gen;
pub mod graph;
pub mod harness;
pub mod kernel;
pub mod oracle;
pub mod pace;
pub mod problem;
pub mod td;
pub mod turing;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Vertex, VertexSet};
pub use problem::{Direction, Payload, ProblemKind, Solution};
pub use td::{NiceTreeDecomposition, TreeDecomposition};
