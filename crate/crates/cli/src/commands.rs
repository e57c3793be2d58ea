use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use halftsp::analysis::{
    estimate_p, exact_expectations, lemma_suite, IncreaseRule, Method, Params, ParityModel, ALPHA, EXACT_TREE_LIMIT,
};
use halftsp::cuts::build_hierarchy;
use halftsp::generate::{generate, library, CostModel, InstanceKind};
use halftsp::instance::{validate, HalfIntegralSolution, SupportGraph};
use halftsp::rng::{stream, Purpose};
use halftsp::run::{RunReport, Summary};
use halftsp::{Prepared, Solver, TrialRecord};

use crate::args::{BenchArgs, Command, GenerateArgs, GraphFormat, MethodArg, Output, RunArgs, Table, VerifyArgs};
use crate::Outcome;

/// Largest E[y_e] allowed on a good edge.
const GOOD_Y_BOUND: f64 = 0.25 - 1.0 / 6480.0;
/// Largest E[z_e] allowed on any edge.
const Z_BOUND: f64 = 0.249962;

pub fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Validate { instance } => cmd_validate(&instance),
        Command::Generate(a) => cmd_generate(&a),
        Command::Hierarchy { instance, format } => cmd_hierarchy(&instance, format),
        Command::Sample { instance, count, seed, epsilon } => cmd_sample(&instance, count, seed, epsilon),
        Command::Solve(a) => cmd_solve(&a.instance, &a.run, a.format),
        Command::VerifyLemmas(a) => cmd_verify(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn load(path: &Path) -> Result<HalfIntegralSolution> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    HalfIntegralSolution::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        bail!(halftsp::Error::Parameters(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

fn cmd_validate(path: &Path) -> Result<Outcome> {
    let sol = load(path)?;
    let report = validate(&sol);
    print_json(&json!({
        "valid": report.is_valid(),
        "min_cut": report.min_cut,
        "violations": report.violations,
    }))?;
    Ok(if report.is_valid() { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_generate(a: &GenerateArgs) -> Result<Outcome> {
    let kind: InstanceKind = a.kind.parse()?;
    let costs = match a.seed {
        Some(seed) => CostModel::Euclidean { seed },
        None => CostModel::Unit,
    };
    let sol = generate(kind, a.size, costs)?;
    let text = sol.to_json() + "\n";
    match &a.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(Outcome::Pass)
}

fn cmd_hierarchy(path: &Path, format: GraphFormat) -> Result<Outcome> {
    let sol = load(path)?;
    let report = validate(&sol);
    if !report.is_valid() {
        bail!(halftsp::Error::Invalid(format!("{} violation(s); run `validate` for details", report.violations.len())));
    }
    let (_, g) = SupportGraph::from_solution(&sol)?;
    let h = build_hierarchy(&g)?;
    let text = match format {
        GraphFormat::Json => h.to_json(),
        GraphFormat::Dot => h.to_dot(),
    };
    writeln!(io::stdout().lock(), "{}", text.trim_end())?;
    let failures = h.check_facts(&g);
    for f in &failures {
        eprintln!("structural check failed: {f}");
    }
    Ok(if failures.is_empty() { Outcome::Pass } else { Outcome::Violation })
}

fn cmd_sample(path: &Path, count: usize, seed: u64, epsilon: f64) -> Result<Outcome> {
    check_epsilon(epsilon)?;
    let solver = Solver::new(&load(path)?, epsilon)?;
    let g = &solver.prep.graph;
    let mut out = io::stdout().lock();
    for t in 0..count as u64 {
        let tree =
            solver.prep.sample(&mut stream(seed, t, Purpose::Trees), &mut stream(seed, t, Purpose::RootCycle))?;
        let line = json!({
            "trial": t,
            "edges": tree.edges,
            "cost": tree.cost(g),
            "odd": tree.odd,
        });
        writeln!(out, "{line}")?;
    }
    Ok(Outcome::Pass)
}

fn build_solver(sol: &HalfIntegralSolution, run: &RunArgs) -> Result<Solver> {
    check_epsilon(run.epsilon)?;
    let solver = Solver::new(sol, run.epsilon)?;
    Ok(if run.certificate {
        solver.with_certificate(Method::Auto { seed: run.seed }, Params::default())?
    } else {
        solver
    })
}

fn certificate_outcome(summary: &Summary) -> Outcome {
    match summary.certificate_failures {
        Some(k) if k > 0 => Outcome::Violation,
        _ => Outcome::Pass,
    }
}

fn cmd_solve(path: &Path, run: &RunArgs, format: Output) -> Result<Outcome> {
    let solver = build_solver(&load(path)?, run)?;
    let report = solver.run(run.seed, run.trials as usize, run.threads)?;
    match format {
        Output::Json => print_json(&report)?,
        Output::Csv => {
            write_records_csv(io::stdout().lock(), &report.records)?;
            eprintln!("{}", serde_json::to_string(&report.summary)?);
        }
    }
    Ok(certificate_outcome(&report.summary))
}

/// Flat CSV row; certificate columns stay empty when no certificate was built.
#[derive(Serialize)]
struct CsvRow {
    trial: u64,
    tree_cost: f64,
    join_cost: f64,
    tour_cost: f64,
    ratio: f64,
    odd_vertices: usize,
    y_feasible: Option<bool>,
    z_feasible: Option<bool>,
    y_min: Option<f64>,
    y_max: Option<f64>,
    z_cost: Option<f64>,
}

fn write_records_csv<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        let c = r.certificate.as_ref();
        wr.serialize(CsvRow {
            trial: r.trial,
            tree_cost: r.tree_cost,
            join_cost: r.join_cost,
            tour_cost: r.tour_cost,
            ratio: r.ratio,
            odd_vertices: r.odd_vertices,
            y_feasible: c.map(|c| c.y_feasible),
            z_feasible: c.map(|c| c.z_feasible),
            y_min: c.map(|c| c.y_min),
            y_max: c.map(|c| c.y_max),
            z_cost: c.map(|c| c.z_cost),
        })?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ExpectationSummary {
    good_edges: usize,
    max_good_y: f64,
    good_y_bound: f64,
    max_z: f64,
    z_bound: f64,
    pass: bool,
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    check_epsilon(a.epsilon)?;
    let sol = load(&a.instance)?;
    let solver = Solver::new(&sol, a.epsilon)?;
    let prep: &Prepared = &solver.prep;
    let model = match a.method {
        MethodArg::Exact => ParityModel::exact(prep, EXACT_TREE_LIMIT)?,
        MethodArg::Mc => {
            let Some(seed) = a.seed else {
                bail!(halftsp::Error::Parameters("--method mc needs --seed".into()));
            };
            ParityModel::sampled(prep, a.trials, seed)?
        }
    };
    let analysis = estimate_p(&prep.graph, &prep.hierarchy, &model)?;
    let report = lemma_suite(prep, &model, &analysis);
    let expectations = if model.is_exact() {
        let rule = if a.both_cuts { IncreaseRule::BothCuts } else { IncreaseRule::OddOnly };
        let params = Params { rule, ..Params::default() };
        let ex = exact_expectations(&model, &analysis, &params, ALPHA)?;
        let good: Vec<_> = ex.iter().filter(|e| e.good).collect();
        let max_good_y = good.iter().map(|e| e.expected_y).fold(f64::NEG_INFINITY, f64::max);
        let max_z = ex.iter().map(|e| e.expected_z).fold(f64::NEG_INFINITY, f64::max);
        Some(ExpectationSummary {
            good_edges: good.len(),
            max_good_y,
            good_y_bound: GOOD_Y_BOUND,
            max_z,
            z_bound: Z_BOUND,
            pass: max_good_y <= GOOD_Y_BOUND + report.tolerance && max_z <= Z_BOUND + report.tolerance,
        })
    } else {
        None
    };
    let pass = report.all_pass() && expectations.as_ref().is_none_or(|e| e.pass);
    print_json(&json!({
        "method": if model.is_exact() { "exact" } else { "mc" },
        "trials": model.trials(),
        "max_fit_error": prep.max_fit_error(),
        "all_pass": pass,
        "summary": report.summary(),
        "expectations": expectations,
        "report": report,
    }))?;
    Ok(if pass { Outcome::Pass } else { Outcome::Violation })
}

#[derive(Serialize)]
struct BenchRow {
    instance: String,
    vertices: usize,
    lp_cost: f64,
    mean_tree_over_lp: f64,
    mean_join_over_lp: f64,
    mean_ratio: f64,
    std_ratio: f64,
    max_ratio: f64,
    ci_low: f64,
    ci_high: f64,
    certificate_failures: Option<usize>,
}

fn bench_row(name: &str, n: usize, report: &RunReport) -> BenchRow {
    let s = &report.summary;
    BenchRow {
        instance: name.to_string(),
        vertices: n,
        lp_cost: s.lp_cost,
        mean_tree_over_lp: s.mean_tree_cost / s.lp_cost,
        mean_join_over_lp: s.mean_join_cost / s.lp_cost,
        mean_ratio: s.mean_ratio,
        std_ratio: s.std_ratio,
        max_ratio: s.max_ratio,
        ci_low: s.ratio_ci.0,
        ci_high: s.ratio_ci.1,
        certificate_failures: s.certificate_failures,
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut outcome = Outcome::Pass;
    for (name, sol) in library() {
        let solver = build_solver(&sol, &a.run).with_context(|| format!("preparing {name}"))?;
        let report = solver.run(a.run.seed, a.run.trials as usize, a.run.threads)?;
        if certificate_outcome(&report.summary) == Outcome::Violation {
            outcome = Outcome::Violation;
        }
        rows.push(bench_row(&name, sol.n, &report));
    }
    match a.format {
        Table::Json => print_json(&rows)?,
        Table::Csv => {
            let mut wr = csv::Writer::from_writer(io::stdout().lock());
            for r in &rows {
                wr.serialize(r)?;
            }
            wr.flush()?;
        }
        Table::Text => print_table(&rows)?,
    }
    Ok(outcome)
}

fn print_table(rows: &[BenchRow]) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<18} {:>4} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "instance", "n", "c(x)", "tree", "join", "ratio", "std", "max", "ci_high"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<18} {:>4} {:>10.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            r.instance,
            r.vertices,
            r.lp_cost,
            r.mean_tree_over_lp,
            r.mean_join_over_lp,
            r.mean_ratio,
            r.std_ratio,
            r.max_ratio,
            r.ci_high
        )?;
    }
    Ok(())
}
