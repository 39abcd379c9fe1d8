//! Enumeration of the tree of numerical semigroups and classification of its
//! nodes by whether they lie on an infinite chain.
//!
//! * [`semigroup`]: the semigroup value type and its invariants
//! * [`tree`]: parent/children and exhaustive, optionally parallel, traversal
//! * [`quadratic`]: exact arithmetic over `Q(√5)`
//! * [`stats`]: the multiplicity/Frobenius window sets and per-genus sweeps
//! * [`cli`]: the `sgtree` command line

pub mod cli;
pub mod quadratic;
pub mod semigroup;
pub mod stats;
pub mod tree;

pub use quadratic::QuadSqrt5;
pub use semigroup::{Semigroup, SemigroupError};
pub use stats::{ClassFlags, EpsilonParams, GenusStats, StatsError};
pub use tree::{ChildStrategy, SubtreeSize, Traversal, TraversalReport, TreeEdge, TreeError};
