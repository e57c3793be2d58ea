//! Exact per-edge expectations of the certificate over trees and Bernoulli outcomes.

use std::collections::BTreeSet;

use serde::Serialize;

use super::certificate::{bernoulli_rate, fallback_value, increase, reduction, Params};
use super::edges::EdgeAnalysis;
use super::parity::ParityModel;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct EdgeExpectation {
    pub edge: usize,
    pub good: bool,
    pub expected_y: f64,
    pub expected_z: f64,
}

/// E[y_e] and E[z_e] for every half-edge, summing over the joint law of the cuts that
/// y_e depends on and over the Bernoulli outcomes of the edges reduced on them.
pub fn exact_expectations(
    model: &ParityModel,
    analysis: &EdgeAnalysis,
    params: &Params,
    alpha: f64,
) -> Result<Vec<EdgeExpectation>> {
    if !model.is_exact() {
        return Err(Error::Infeasible("expectations need an enumerated tree law, not samples".into()));
    }
    params.validate()?;
    let m = analysis.edges.len();
    let mut out = Vec::with_capacity(m);
    for e in 0..m {
        let ey = if analysis.is_good(e) { expected_y(model, analysis, params, e)? } else { 0.25 };
        let ez = alpha * ey + (1.0 - alpha) * fallback_value(analysis, e);
        out.push(EdgeExpectation { edge: e, good: analysis.is_good(e), expected_y: ey, expected_z: ez });
    }
    Ok(out)
}

fn expected_y(model: &ParityModel, analysis: &EdgeAnalysis, params: &Params, e: usize) -> Result<f64> {
    let info = analysis.info(e).expect("good edges carry info");
    let mut near: BTreeSet<usize> = BTreeSet::new();
    for &c in &info.last_cuts {
        near.extend(analysis.cuts.boundary(c).iter().copied().filter(|&f| analysis.is_good(f)));
    }
    near.insert(e);
    let mut cuts: BTreeSet<usize> = info.last_cuts.iter().copied().collect();
    for &f in &near {
        cuts.extend(analysis.info(f).expect("good").last_cuts);
    }
    let cuts: Vec<usize> = cuts.into_iter().collect();
    if cuts.len() > 64 {
        return Err(Error::Internal("too many cuts around one edge".into()));
    }
    let mut bit = vec![usize::MAX; analysis.cuts.len()];
    for (i, &c) in cuts.iter().enumerate() {
        bit[c] = i;
    }
    let sets: Vec<&[usize]> = cuts.iter().map(|&c| analysis.cuts.boundary(c)).collect();
    let joint = model.joint(&sets);
    let owners: Vec<usize> =
        near.iter().map(|&f| analysis.bernoulli_group(f)).collect::<BTreeSet<_>>().into_iter().collect();
    let mut total = 0.0;
    for (&mask, &pm) in &joint {
        let odd = |c: usize| {
            debug_assert!(bit[c] != usize::MAX, "cut outside the tracked set");
            (mask >> bit[c]) & 1 == 1
        };
        // only owners even at last can be reduced; the rest are irrelevant
        let live: Vec<usize> = owners
            .iter()
            .copied()
            .filter(|&o| {
                let [a, b] = analysis.info(o).expect("good").last_cuts;
                !odd(a) && !odd(b)
            })
            .collect();
        let mut ey = 0.0;
        for combo in 0u64..(1 << live.len()) {
            let mut w = 1.0;
            for (i, &o) in live.iter().enumerate() {
                let q = bernoulli_rate(analysis, params, o);
                w *= if (combo >> i) & 1 == 1 { q } else { 1.0 - q };
            }
            if w == 0.0 {
                continue;
            }
            let b = |f: usize| {
                let o = analysis.bernoulli_group(f);
                live.iter().position(|&x| x == o).is_some_and(|i| (combo >> i) & 1 == 1)
            };
            let y = 0.25 - reduction(analysis, params, e, &odd, &b) + increase(analysis, params, e, &odd, &b);
            ey += w * y;
        }
        total += pm * ey;
    }
    Ok(total)
}
