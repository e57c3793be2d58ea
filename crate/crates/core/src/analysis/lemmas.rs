//! Checks every probabilistic bound the rounding relies on, per witness, against
//! the law of the sampled 1-tree.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::bernoulli::{bernoulli_extremes, count_distribution, even_mass, Goal, MeanConstraint};
use super::edges::{EdgeAnalysis, GOOD_THRESHOLD};
use super::parity::{prob, ParityModel};
use crate::cuts::NodeKind;
use crate::pipeline::PreparedInstance;
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub witness: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremeCheck {
    pub name: &'static str,
    pub value: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    /// False when probabilities come from samples; values are then estimates.
    pub exact: bool,
    pub tolerance: f64,
    pub checks: Vec<LemmaCheck>,
    pub extremes: Vec<ExtremeCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSummary {
    pub lemma: &'static str,
    pub witnesses: usize,
    pub failures: usize,
    /// Smallest value minus bound over witnesses.
    pub worst_margin: f64,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.extremes.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn summary(&self) -> Vec<LemmaSummary> {
        let mut out: Vec<LemmaSummary> = Vec::new();
        for c in &self.checks {
            let margin = c.value - c.bound;
            match out.iter_mut().find(|s| s.lemma == c.lemma) {
                Some(s) => {
                    s.witnesses += 1;
                    s.failures += usize::from(!c.pass);
                    s.worst_margin = s.worst_margin.min(margin);
                }
                None => out.push(LemmaSummary {
                    lemma: c.lemma,
                    witnesses: 1,
                    failures: usize::from(!c.pass),
                    worst_margin: margin,
                }),
            }
        }
        out
    }

    pub fn count(&self, lemma: &str) -> usize {
        self.checks.iter().filter(|c| c.lemma == lemma).count()
    }
}

pub const CUT_EVEN: &str = "cut_even";
pub const BOTTOM_EDGE: &str = "bottom_edge_even_at_last";
pub const GOOD_EDGE_PER_CUT: &str = "good_edge_in_every_cut";
pub const BESIDE_HIGHER: &str = "two_good_beside_higher_edge";
pub const TRIPLE_ONE: &str = "covered_triple_exactly_one";
pub const TRIPLE_TWO: &str = "covered_triple_exactly_two";
pub const PAIR_ONE: &str = "pair_exactly_one";
pub const TWO_PAIRS: &str = "two_pairs_exactly_one_each";
pub const CONDITIONAL: &str = "conditional_marginals";

/// Absolute slack granted for fitted rather than exact marginals.
pub fn tolerance_for(fit_error: f64) -> f64 {
    1e-12 + 10.0 * fit_error
}

pub fn lemma_suite<S: Scalar>(prep: &PreparedInstance<S>, model: &ParityModel, analysis: &EdgeAnalysis) -> LemmaReport {
    let tol = tolerance_for(prep.max_fit_error().to_f64().unwrap_or(f64::NAN));
    let h = &prep.hierarchy;
    let cuts = &analysis.cuts;
    let regular = |e: usize| analysis.info(e).is_some();
    let p_even = |e: usize| analysis.info(e).map_or(0.0, |i| i.p_even);
    let mut checks = Vec::new();
    let mut push = |lemma, witness: String, value: f64, bound: f64| {
        checks.push(LemmaCheck { lemma, witness, value, bound, pass: value >= bound - tol });
    };
    let fmt_cut = |c: usize| format!("cut {:?}", cuts.cuts[c].members.to_vec());

    for c in 0..cuts.len() {
        let boundary = cuts.boundary(c);
        let even = prob(&model.joint(&[boundary]), |k| k == 0);
        push(CUT_EVEN, fmt_cut(c), even, 13.0 / 27.0);
        let best = boundary.iter().copied().filter(|&e| regular(e)).map(p_even).fold(0.0, f64::max);
        push(GOOD_EDGE_PER_CUT, fmt_cut(c), best, GOOD_THRESHOLD);

        let reg: Vec<usize> = boundary.iter().copied().filter(|&e| regular(e)).collect();
        let ind = model.indicators(&reg);
        let count_law = |members: &[usize]| {
            let mask: u64 = members.iter().map(|&i| 1u64 << i).sum();
            let mut law = vec![0.0; members.len() + 1];
            for (&k, &p) in &ind {
                law[(k & mask).count_ones() as usize] += p;
            }
            law
        };
        let k = reg.len();
        for a in 0..k {
            for b in a + 1..k {
                let law = count_law(&[a, b]);
                push(PAIR_ONE, format!("edges {} {}", reg[a], reg[b]), law[1], 3.0 / 8.0);
                for d in b + 1..k {
                    let law = count_law(&[a, b, d]);
                    if law[0] <= 1e-12 {
                        let w = format!("edges {} {} {}", reg[a], reg[b], reg[d]);
                        push(TRIPLE_ONE, w.clone(), law[1], 0.5);
                        push(TRIPLE_TWO, w, law[2], 3.0 / 8.0);
                    }
                }
            }
        }
        if k == 4 {
            for (p, q) in [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])] {
                let both: f64 = ind
                    .iter()
                    .filter(|(&m, _)| ((m >> p[0]) ^ (m >> p[1])) & 1 == 1 && ((m >> q[0]) ^ (m >> q[1])) & 1 == 1)
                    .map(|(_, &pr)| pr)
                    .sum();
                let w = format!("pairs {} {} | {} {}", reg[p[0]], reg[p[1]], reg[q[0]], reg[q[1]]);
                push(TWO_PAIRS, w, both, 3.0 / 16.0);
            }
        }
        for i in 0..k {
            let given = prob(&ind, |m| (m >> i) & 1 == 1);
            if given <= 0.0 {
                continue;
            }
            let inside = (0..k)
                .filter(|&j| j != i)
                .filter(|&j| {
                    let pj = prob(&ind, |m| (m >> i) & 1 == 1 && (m >> j) & 1 == 1) / given;
                    pj >= 0.25 - tol && pj <= 0.5 + tol
                })
                .count();
            let w = format!("edge {} against rest of {}", reg[i], fmt_cut(c));
            push(CONDITIONAL, w, inside as f64, (k - 2) as f64);
        }
    }

    for info in analysis.edges.iter().flatten().filter(|i| i.bottom) {
        push(BOTTOM_EDGE, format!("edge {}", info.edge), info.p_even, 3.0 / 16.0);
    }

    for node in h.nodes.iter().filter(|n| n.kind != NodeKind::RootCycle) {
        let higher: Vec<usize> = node.boundary.iter().copied().filter(|&e| h.goes_higher(e, node.id)).collect();
        if higher.len() != 1 {
            continue;
        }
        let strong =
            node.boundary.iter().filter(|&&e| e != higher[0] && regular(e) && p_even(e) >= 1.0 / 16.0 - tol).count();
        push(BESIDE_HIGHER, format!("node {} beside edge {}", node.id, higher[0]), strong as f64, 2.0);
    }

    LemmaReport { exact: model.is_exact(), tolerance: tol, checks, extremes: extremal_checks() }
}

/// The closed-form floors the witnesses are compared against, recomputed in exact arithmetic.
pub fn extremal_checks() -> Vec<ExtremeCheck> {
    let r = Rational::new;
    let mut out = Vec::new();
    let mut check = |name, value: Rational, expected: Rational| {
        let close = (value.to_f64().unwrap_or(f64::NAN) - expected.to_f64().unwrap_or(f64::NAN)).abs() <= 1e-12;
        out.push(ExtremeCheck {
            name,
            value: value.to_string(),
            expected: expected.to_string(),
            pass: close && value == expected,
        });
    };
    check("sure_plus_two_quarters_exactly_one", count_distribution(&[r(1, 1), r(1, 4), r(1, 4)])[1], r(9, 16));
    let exact = |mu| MeanConstraint::Exact(mu);
    let v = bernoulli_extremes(3, 1, &exact(r(3, 2)), |d| d[1], Goal::Minimize).map(|x| x.value);
    check("sure_triple_exactly_one_floor", v.unwrap_or_default(), r(1, 2));
    let v = bernoulli_extremes(3, 1, &exact(r(3, 2)), |d| d[2], Goal::Minimize).map(|x| x.value);
    check("sure_triple_exactly_two_floor", v.unwrap_or_default(), r(3, 8));
    let range = MeanConstraint::Range { lo: r(1, 2), hi: r(3, 2), steps: 48 };
    let v = bernoulli_extremes(2, 0, &range, |d| d[1], Goal::Minimize).map(|x| x.value);
    check("pair_exactly_one_floor", v.unwrap_or_default(), r(3, 8));
    let v = bernoulli_extremes(4, 1, &exact(r(2, 1)), even_mass, Goal::Minimize).map(|x| x.value);
    check("sure_quadruple_even_floor", v.unwrap_or_default(), r(13, 27));
    out
}
