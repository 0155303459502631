//! Exact genus distributions for graphs of treewidth at most 2 and maximum
//! degree at most 3.
//!
//! The cubic biconnected series-parallel case is handled by splitting the
//! graph at a pair of terminals into three strings built by repeated
//! edge-trisection, computing a partitioned genus distribution for each
//! string with a small table of productions, and closing the three strings
//! back up in parallel. General inputs are reduced to that case block by
//! block and recombined by bar-amalgamation.
//!
//! An exhaustive rotation-system enumerator ([`oracle`]) is included as an
//! independent check on small inputs.
//!
//! ```
//! use spgenus_core::{engine, multigraph::parse_graph};
//!
//! let dipole = parse_graph("0 1\n0 1\n0 1\n").unwrap();
//! let report = engine::gd_treewidth2_maxdeg3(&dipole).unwrap();
//! assert_eq!(report.distribution.to_string(), "2 2");
//! ```

pub mod decompose;
pub mod engine;
pub mod multigraph;
pub mod oracle;
pub mod pgd;
pub mod productions;

pub use num_bigint::BigUint;

pub use decompose::{DmtExpression, RootedString};
pub use engine::{ComputationReport, EngineError};
pub use multigraph::{EdgeId, Multigraph, VertexId};
pub use pgd::{ClosurePartials, GenusDistribution, UUPartials};
