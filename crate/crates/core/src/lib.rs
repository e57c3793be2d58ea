//! Randomized rounding of half-integral subtour LP solutions for metric TSP,
//! with exact and sampled checks of the probabilistic facts it relies on.

pub mod analysis;
pub mod cuts;
pub mod error;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod join;
pub mod maxent;
pub mod pipeline;
pub mod rng;
pub mod run;
pub mod scalar;
pub mod vset;

pub use error::{Error, Result};
pub use run::{RunReport, Solver, TrialRecord};
pub use scalar::{Field, Scalar};
pub use vset::VertexSet;

/// Exact rational type used by the exact-arithmetic checks.
pub type Rational = num_rational::Ratio<i64>;

/// Per-critical-set tree laws in double precision.
pub type Prepared = pipeline::PreparedInstance<f64>;

/// Fitted tree distribution in double precision.
pub type TreeLaw = maxent::TreeDistribution<f64>;
