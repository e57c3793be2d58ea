//! Half-integral subtour LP solutions: parsing, validation, the unit edge `e⁺`,
//! the 4-regular support multigraph and the metric used for matching.

mod metric;
mod solution;
mod support;

pub use metric::{metric_closure, DistanceOracle};
pub use solution::{validate, EdgeRecord, HalfIntegralSolution, ValidationReport, Violation};
pub use support::{build_support, ensure_unit_edge, HalfEdge, SplitRecord, SupportGraph, UnitEdgeSolution};

/// Absolute/relative slack used when checking the triangle inequality on input matrices.
pub const METRIC_TOLERANCE: f64 = 1e-8;
