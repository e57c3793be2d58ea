//! λ-uniform spanning-tree distributions: exact marginals, fitting to target marginals,
//! exact sampling and an enumeration oracle for small graphs.

mod distribution;
mod enumerate;
pub mod linalg;
mod rank;
mod sample;

pub use distribution::{exact_marginals, fit_lambdas, fit_lambdas_with, FitConfig, TreeDistribution};
pub use enumerate::{enumerate_trees, enumerate_trees_capped, tree_marginals, WeightedTree, TREE_CAP};
pub use rank::{
    polynomial_roots, rank_polynomial_exact, rank_sequence, rank_sequence_sampled, real_root_report, RealRootReport,
};
pub use sample::{sample_tree, TreeSampler};

/// Default relative tolerance for fitted marginals.
pub const DEFAULT_EPSILON: f64 = 1e-3;
