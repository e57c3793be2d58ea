//! Which edges are even at last and how often, the randomized O-join certificate
//! built from that, and exact checks of the probability bounds behind it.

mod bernoulli;
mod certificate;
mod edges;
mod expectation;
pub mod lemmas;
mod parity;

pub use bernoulli::{bernoulli_extremes, count_distribution, even_mass, Extreme, Goal, MeanConstraint};
pub use certificate::{
    bernoulli_rate, build_y, combine_certificate, construct_y, draw_bernoullis, fallback_value, verify_feasibility,
    CutViolation, FeasibilityReport, IncreaseRule, JoinVector, Params, ALPHA,
};
pub use edges::{estimate_p, CutIndex, EdgeAnalysis, EdgeInfo, ReductionClass, GOOD_THRESHOLD};
pub use expectation::{exact_expectations, EdgeExpectation};
pub use lemmas::{
    extremal_checks, lemma_suite, tolerance_for, ExtremeCheck, LemmaCheck, LemmaReport, LemmaSummary, BESIDE_HIGHER,
    BOTTOM_EDGE, CONDITIONAL, CUT_EVEN, GOOD_EDGE_PER_CUT, PAIR_ONE, TRIPLE_ONE, TRIPLE_TWO, TWO_PAIRS,
};
pub use parity::{prob, wilson_interval, Joint, Method, ParityModel, EXACT_TREE_LIMIT};
