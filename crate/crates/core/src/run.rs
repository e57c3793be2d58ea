//! End-to-end trials: sample a 1-tree, join its odd vertices, shortcut, and
//! optionally build and check the O-join certificate for the same tree.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    combine_certificate, construct_y, estimate_p, verify_feasibility, EdgeAnalysis, Method, Params, ParityModel, ALPHA,
};
use crate::cuts::build_hierarchy;
use crate::error::{Error, Result};
use crate::instance::{metric_closure, validate, DistanceOracle, HalfIntegralSolution, SupportGraph, UnitEdgeSolution};
use crate::join::{min_ojoin, shortcut};
use crate::pipeline::PreparedInstance;
use crate::rng::{stream, Purpose};

/// Everything shared by the trials of one instance.
#[derive(Clone, Debug)]
pub struct Solver {
    pub unit: UnitEdgeSolution,
    pub prep: PreparedInstance<f64>,
    pub metric: DistanceOracle,
    pub certificate: Option<(EdgeAnalysis, Params)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub y_feasible: bool,
    pub z_feasible: bool,
    pub y_min: f64,
    pub y_max: f64,
    /// Every edge that is not good kept y = ¼.
    pub others_untouched: bool,
    /// Σ z_e c_e, an upper bound on the optimal O-join.
    pub z_cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub tree_cost: f64,
    pub join_cost: f64,
    pub tour_cost: f64,
    pub ratio: f64,
    pub odd_vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub lp_cost: f64,
    pub mean_tree_cost: f64,
    pub mean_join_cost: f64,
    pub mean_tour_cost: f64,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub max_ratio: f64,
    /// 99% normal interval for the mean ratio.
    pub ratio_ci: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_failures: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
}

impl Solver {
    /// Validates, builds the hierarchy and fits every critical set.
    pub fn new(sol: &HalfIntegralSolution, epsilon: f64) -> Result<Self> {
        let report = validate(sol);
        if !report.is_valid() {
            return Err(Error::Invalid(format!(
                "{} violation(s), first: {:?}",
                report.violations.len(),
                report.violations[0]
            )));
        }
        let (unit, g) = SupportGraph::from_solution(sol)?;
        let metric = metric_closure(&unit.solution, &g)?;
        let h = build_hierarchy(&g)?;
        let prep = PreparedInstance::new(g, h, epsilon)?;
        Ok(Solver { unit, prep, metric, certificate: None })
    }

    /// Classifies edges so that each trial also builds and checks the certificate.
    pub fn with_certificate(mut self, method: Method, params: Params) -> Result<Self> {
        params.validate()?;
        let model = ParityModel::new(&self.prep, method)?;
        let analysis = estimate_p(&self.prep.graph, &self.prep.hierarchy, &model)?;
        self.certificate = Some((analysis, params));
        Ok(self)
    }

    pub fn lp_cost(&self) -> f64 {
        self.prep.graph.cost_x
    }

    pub fn trial(&self, seed: u64, t: u64) -> Result<TrialRecord> {
        let g = &self.prep.graph;
        let tree = self.prep.sample(&mut stream(seed, t, Purpose::Trees), &mut stream(seed, t, Purpose::RootCycle))?;
        let join = min_ojoin(&self.metric, &tree.odd)?;
        let tour = shortcut(g, &tree.edges, &join, &self.metric)?;
        let certificate = match &self.certificate {
            None => None,
            Some((analysis, params)) => {
                let in_tree = tree.indicator(g.num_edges());
                let jv = construct_y(&in_tree, analysis, params, &mut stream(seed, t, Purpose::Bernoulli))?;
                let z = combine_certificate(&jv.y, analysis, ALPHA);
                let yr = verify_feasibility(&jv.y, &in_tree, &analysis.cuts);
                let zr = verify_feasibility(&z, &in_tree, &analysis.cuts);
                Some(CertificateRecord {
                    y_feasible: yr.is_feasible(),
                    z_feasible: zr.is_feasible(),
                    y_min: jv.y.iter().copied().fold(f64::INFINITY, f64::min),
                    y_max: jv.y.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    others_untouched: (0..g.num_edges()).filter(|&e| !analysis.is_good(e)).all(|e| jv.y[e] == 0.25),
                    z_cost: z.iter().zip(&g.edges).map(|(ze, he)| ze * he.cost).sum(),
                })
            }
        };
        let lp = self.lp_cost();
        Ok(TrialRecord {
            trial: t,
            tree_cost: tree.cost(g),
            join_cost: join.cost,
            tour_cost: tour.cost,
            ratio: if lp > 0.0 { tour.cost / lp } else { 1.0 },
            odd_vertices: tree.odd.len(),
            certificate,
        })
    }

    /// Runs trials 0..trials on `threads` workers (all cores when `None`); records are
    /// kept in trial order so the output does not depend on scheduling.
    pub fn run(&self, seed: u64, trials: usize, threads: Option<usize>) -> Result<RunReport> {
        let work = || (0..trials as u64).into_par_iter().map(|t| self.trial(seed, t)).collect::<Result<Vec<_>>>();
        let records = match threads {
            None => work()?,
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?
                .install(work)?,
        };
        Ok(RunReport { summary: summarize(&records, self.lp_cost()), records })
    }
}

pub fn summarize(records: &[TrialRecord], lp_cost: f64) -> Summary {
    let n = records.len().max(1) as f64;
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(f).sum::<f64>() / n;
    let mean_ratio = mean(&|r| r.ratio);
    let var = if records.len() > 1 {
        records.iter().map(|r| (r.ratio - mean_ratio).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let std_ratio = var.sqrt();
    let half = 2.5758293035489004 * std_ratio / n.sqrt();
    let certificate_failures = records.first().and_then(|r| r.certificate.as_ref()).map(|_| {
        records.iter().filter_map(|r| r.certificate.as_ref()).filter(|c| !(c.y_feasible && c.z_feasible)).count()
    });
    Summary {
        trials: records.len(),
        lp_cost,
        mean_tree_cost: mean(&|r| r.tree_cost),
        mean_join_cost: mean(&|r| r.join_cost),
        mean_tour_cost: mean(&|r| r.tour_cost),
        mean_ratio,
        std_ratio,
        max_ratio: records.iter().map(|r| r.ratio).fold(0.0, f64::max),
        ratio_ci: (mean_ratio - half, mean_ratio + half),
        certificate_failures,
    }
}
