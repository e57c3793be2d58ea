//! The randomized O-join vector: reductions on edges even at last, compensating
//! increases on odd cuts, and the convex combination with the good/bad fallback.

use rand::Rng;
use serde::Serialize;

use super::edges::{CutIndex, EdgeAnalysis, ReductionClass, GOOD_THRESHOLD};
use crate::error::{Error, Result};

/// Weight of the randomized vector in the combined certificate.
pub const ALPHA: f64 = 2160.0 / 2161.0;

const TOL: f64 = 1e-12;

/// How an edge whose last cut is odd is raised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IncreaseRule {
    /// Max over the per-edge shares of the odd last cuts only.
    #[default]
    OddOnly,
    /// Max of the shares of both last cuts as soon as one is odd.
    BothCuts,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub beta: f64,
    pub tau2: f64,
    pub tau3: f64,
    /// Target probability each good edge is reduced with.
    pub p: f64,
    pub rule: IncreaseRule,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            beta: 1.0 / 12.0,
            tau2: 7.0 / 120.0,
            tau3: 7.0 / 180.0,
            p: GOOD_THRESHOLD,
            rule: IncreaseRule::OddOnly,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        let Params { beta, tau2, tau3, p, .. } = *self;
        let ok = tau3 > 0.0
            && tau3 <= tau2 + TOL
            && tau2 <= beta + TOL
            && beta <= 1.0 / 12.0 + TOL
            && beta + TOL >= 1.25 * tau2
            && 3.0 * tau3 <= 2.0 * tau2 + TOL
            && p > 0.0
            && p <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Parameters(format!(
                "need 0 < τ₃ ≤ τ₂ ≤ β ≤ 1/12, β ≥ 5τ₂/4, 3τ₃ ≤ 2τ₂, 0 < p ≤ 1; got β={beta}, τ₂={tau2}, τ₃={tau3}, p={p}"
            )))
        }
    }

    fn amount(&self, class: ReductionClass) -> f64 {
        match class {
            ReductionClass::Bottom => self.beta,
            ReductionClass::TopPair => self.tau2,
            ReductionClass::TopOther => self.tau3,
        }
    }
}

/// The vector built for one 1-tree.
#[derive(Clone, Debug, Serialize)]
pub struct JoinVector {
    pub y: Vec<f64>,
    pub bernoulli: Vec<bool>,
    pub reductions: Vec<f64>,
    pub increases: Vec<f64>,
    /// (cut index, total reduction on it) for each odd cut with a deficit.
    pub deficits: Vec<(usize, f64)>,
}

/// Success probability of each Bernoulli owner, p/p_e.
pub fn bernoulli_rate(analysis: &EdgeAnalysis, params: &Params, e: usize) -> f64 {
    let pe = analysis.info(e).map_or(1.0, |i| i.p_even);
    (params.p / pe).min(1.0)
}

/// Draws one Bernoulli per good companion group, in increasing owner order.
pub fn draw_bernoullis<R: Rng + ?Sized>(analysis: &EdgeAnalysis, params: &Params, rng: &mut R) -> Vec<bool> {
    let m = analysis.edges.len();
    let mut b = vec![false; m];
    for info in analysis.good_edges() {
        let e = info.edge;
        if analysis.bernoulli_group(e) == e {
            b[e] = rng.gen_bool(bernoulli_rate(analysis, params, e));
        }
    }
    for info in analysis.good_edges() {
        b[info.edge] = b[analysis.bernoulli_group(info.edge)];
    }
    b
}

/// Reduction of `e` given cut parities and Bernoulli outcomes.
pub fn reduction(
    analysis: &EdgeAnalysis,
    params: &Params,
    e: usize,
    odd: &dyn Fn(usize) -> bool,
    b: &dyn Fn(usize) -> bool,
) -> f64 {
    match analysis.info(e) {
        Some(i) if i.good && b(e) && !odd(i.last_cuts[0]) && !odd(i.last_cuts[1]) => {
            params.amount(i.class.expect("good edges are classified"))
        }
        _ => 0.0,
    }
}

/// Total reduction on the boundary of cut `c`.
pub fn deficit(
    analysis: &EdgeAnalysis,
    params: &Params,
    c: usize,
    odd: &dyn Fn(usize) -> bool,
    b: &dyn Fn(usize) -> bool,
) -> f64 {
    analysis.cuts.boundary(c).iter().map(|&f| reduction(analysis, params, f, odd, b)).sum()
}

/// Increase of a good edge with an odd last cut; zero otherwise.
pub fn increase(
    analysis: &EdgeAnalysis,
    params: &Params,
    e: usize,
    odd: &dyn Fn(usize) -> bool,
    b: &dyn Fn(usize) -> bool,
) -> f64 {
    let Some(info) = analysis.info(e).filter(|i| i.good) else { return 0.0 };
    let [c0, c1] = info.last_cuts;
    if !odd(c0) && !odd(c1) {
        return 0.0;
    }
    let share = |c: usize| deficit(analysis, params, c, odd, b) / analysis.good_on_cut[c].len() as f64;
    match params.rule {
        IncreaseRule::BothCuts => share(c0).max(share(c1)),
        IncreaseRule::OddOnly => [c0, c1].into_iter().filter(|&c| odd(c)).map(share).fold(0.0, f64::max),
    }
}

/// Builds y for a tree given by its membership indicator.
pub fn construct_y<R: Rng + ?Sized>(
    in_tree: &[bool],
    analysis: &EdgeAnalysis,
    params: &Params,
    rng: &mut R,
) -> Result<JoinVector> {
    params.validate()?;
    let parity = analysis.cuts.parities(in_tree);
    let bern = draw_bernoullis(analysis, params, rng);
    build_y(&parity, bern, analysis, params)
}

/// The deterministic part of [`construct_y`], given cut parities and Bernoulli outcomes.
pub fn build_y(parity: &[bool], bernoulli: Vec<bool>, analysis: &EdgeAnalysis, params: &Params) -> Result<JoinVector> {
    let m = analysis.edges.len();
    let odd = |c: usize| parity[c];
    let b = |e: usize| bernoulli[e];
    let reductions: Vec<f64> = (0..m).map(|e| reduction(analysis, params, e, &odd, &b)).collect();
    let mut deficits = Vec::new();
    for c in (0..analysis.cuts.len()).filter(|&c| parity[c]) {
        let d: f64 = analysis.cuts.boundary(c).iter().map(|&f| reductions[f]).sum();
        if d > 0.0 {
            if analysis.good_on_cut[c].is_empty() {
                return Err(Error::Certificate(format!(
                    "odd cut {:?} lost {d} with no good edge to compensate",
                    analysis.cuts.cuts[c].members.to_vec()
                )));
            }
            deficits.push((c, d));
        }
    }
    let increases: Vec<f64> = (0..m).map(|e| increase(analysis, params, e, &odd, &b)).collect();
    let y = (0..m).map(|e| 0.25 - reductions[e] + increases[e]).collect();
    Ok(JoinVector { y, bernoulli, reductions, increases, deficits })
}

/// z = αy + (1−α)y′ with y′ = ½ on good edges and 1/6 elsewhere.
pub fn combine_certificate(y: &[f64], analysis: &EdgeAnalysis, alpha: f64) -> Vec<f64> {
    y.iter().enumerate().map(|(e, &ye)| alpha * ye + (1.0 - alpha) * fallback_value(analysis, e)).collect()
}

/// The deterministic fallback vector's entry.
pub fn fallback_value(analysis: &EdgeAnalysis, e: usize) -> f64 {
    if analysis.is_good(e) {
        0.5
    } else {
        1.0 / 6.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CutViolation {
    pub cut: usize,
    pub side: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub odd_cuts: usize,
    pub violations: Vec<CutViolation>,
    pub min_entry: f64,
}

impl FeasibilityReport {
    /// Every odd min cut is covered and all entries are at least 1/6, which covers
    /// every other cut since those hold at least six half-edges.
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty() && self.min_entry >= 1.0 / 6.0 - TOL
    }
}

/// Checks vec(δ(S)) ≥ 1 on every min cut that the tree crosses an odd number of times.
pub fn verify_feasibility(vec: &[f64], in_tree: &[bool], cuts: &CutIndex) -> FeasibilityReport {
    let parity = cuts.parities(in_tree);
    let mut violations = Vec::new();
    for c in (0..cuts.len()).filter(|&c| parity[c]) {
        let value: f64 = cuts.boundary(c).iter().map(|&e| vec[e]).sum();
        if value < 1.0 - TOL {
            violations.push(CutViolation { cut: c, side: cuts.cuts[c].members.to_vec(), value });
        }
    }
    let min_entry = vec.iter().copied().fold(f64::INFINITY, f64::min);
    FeasibilityReport { odd_cuts: parity.iter().filter(|&&o| o).count(), violations, min_entry }
}
