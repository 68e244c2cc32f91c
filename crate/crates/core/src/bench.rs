//! Batch benchmark over a matrix of generated instances.
//!
//! A matrix is a JSON array of cells. Each cell names a problem, generator
//! knobs and how many instances and seeds to run. Every trial is revalidated
//! against its instance, compared with the exact oracle when the instance is
//! small enough, and written as one JSON line; each cell ends with a summary
//! line.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cvc::{self, AutoQb, ExactQb, MstQb, QbSteinerSolver};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ratio::{self, Rational};
use crate::setcover::{self, SetCoverInstance};
use crate::steiner::{self, MdstpParams, SteinerInstance, SteinerTreeSolution};
use crate::testbed::{self, GenSpec};
use crate::vc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Vc,
    Cvc,
    Sc,
    St,
}

/// A rational written either as a JSON number or as a string like `"3/2"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RatioField {
    Number(f64),
    Text(String),
}

impl RatioField {
    fn value(&self) -> Result<Rational> {
        match self {
            RatioField::Number(x) => ratio::parse_rational(&format!("{x}")),
            RatioField::Text(s) => ratio::parse_rational(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    problem: Problem,
    n: usize,
    psi: RatioField,
    #[serde(default = "one")]
    instances: usize,
    #[serde(default = "one")]
    seeds: usize,
    #[serde(default)]
    seed: u64,
    delta: Option<RatioField>,
    epsilon: Option<RatioField>,
    a: Option<RatioField>,
    rho: Option<RatioField>,
    sets: Option<usize>,
    terminals: Option<usize>,
    qb: Option<String>,
    mode: Option<String>,
    budget: Option<u64>,
    oracle: Option<bool>,
}

fn one() -> usize {
    1
}

/// One parsed matrix cell with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub problem: Problem,
    pub instances: usize,
    pub seeds: usize,
    pub spec: GenSpec,
    #[serde(serialize_with = "ser_ratio")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub epsilon: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub a: Rational,
    pub qb: String,
    pub mode: String,
    pub budget: u64,
    pub oracle: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio::to_f64(r))
}

fn opt_ratio(field: &Option<RatioField>, default: Rational) -> Result<Rational> {
    field.as_ref().map_or(Ok(default), RatioField::value)
}

impl Cell {
    fn from_raw(raw: RawCell) -> Result<Cell> {
        let mut spec = GenSpec::new(raw.n, raw.psi.value()?, raw.seed);
        if let Some(rho) = &raw.rho {
            spec = spec.with_rho(rho.value()?);
        }
        if let Some(m) = raw.sets {
            spec = spec.with_sets(m);
        }
        if let Some(t) = raw.terminals {
            spec = spec.with_terminals(t);
        }
        let qb = raw.qb.unwrap_or_else(|| "auto".into());
        if !matches!(qb.as_str(), "mst" | "exact" | "auto") {
            return Err(Error::input(format!("unknown qb plug-in {qb:?}")));
        }
        let mode = raw.mode.unwrap_or_else(|| "greedy".into());
        if !matches!(mode.as_str(), "greedy" | "exact") {
            return Err(Error::input(format!("unknown set cover mode {mode:?}")));
        }
        Ok(Cell {
            problem: raw.problem,
            instances: raw.instances,
            seeds: raw.seeds,
            spec,
            delta: opt_ratio(&raw.delta, Rational::new(1, 2))?,
            epsilon: opt_ratio(&raw.epsilon, Rational::new(1, 10))?,
            a: opt_ratio(&raw.a, Rational::from_integer(1))?,
            qb,
            mode,
            budget: raw.budget.unwrap_or(setcover::DEFAULT_BUDGET),
            oracle: raw.oracle.unwrap_or(true),
        })
    }
}

/// Parses a matrix file. JSON syntax errors carry their line number.
pub fn parse_matrix(text: &str) -> Result<Vec<Cell>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let raw: Vec<RawCell> =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    raw.into_iter().map(Cell::from_raw).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub kind: &'static str,
    pub problem: Problem,
    pub instance_id: String,
    pub solver: String,
    pub seed: u64,
    pub solution_size: usize,
    pub oracle_optimum: Option<usize>,
    #[serde(serialize_with = "ratio::serialize_opt_ratio")]
    pub empirical_ratio: Option<Rational>,
    #[serde(serialize_with = "ratio::serialize_opt_ratio")]
    pub certified_bound: Option<Rational>,
    pub nodes_or_states: u64,
    pub wall_ms: u64,
    pub valid: bool,
    pub bound_violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub kind: &'static str,
    pub cell: usize,
    pub problem: Problem,
    pub reports: usize,
    pub with_oracle: usize,
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub bound_violations: usize,
    pub invalid: usize,
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutcome {
    pub reports: Vec<TrialReport>,
    pub summaries: Vec<CellSummary>,
}

impl BenchOutcome {
    /// Whether any trial produced an invalid solution.
    pub fn any_invalid(&self) -> bool {
        self.summaries.iter().any(|s| s.invalid > 0)
    }
}

enum Instance {
    Graph(Graph),
    SetCover(SetCoverInstance),
    Steiner(SteinerInstance),
}

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn generate(cell: &Cell, seed: u64) -> Result<Instance> {
    let spec = GenSpec {
        seed,
        ..cell.spec.clone()
    };
    Ok(match cell.problem {
        Problem::Vc | Problem::Cvc => Instance::Graph(testbed::gen_subdense_graph(&spec)?.0),
        Problem::Sc => Instance::SetCover(testbed::gen_dense_setcover(&spec)?),
        Problem::St => Instance::Steiner(testbed::gen_dense_steiner(&spec)?),
    })
}

fn oracle(cell: &Cell, inst: &Instance) -> Option<usize> {
    if !cell.oracle {
        return None;
    }
    match (cell.problem, inst) {
        (Problem::Vc, Instance::Graph(g)) => testbed::brute_vc(g).ok(),
        (Problem::Cvc, Instance::Graph(g)) => testbed::brute_cvc(g).ok(),
        (Problem::Sc, Instance::SetCover(s)) => testbed::brute_sc(s).ok(),
        (Problem::St, Instance::Steiner(s)) => testbed::brute_steiner(s).ok(),
        _ => None,
    }
}

fn qb_for(name: &str) -> Box<dyn QbSteinerSolver> {
    match name {
        "mst" => Box::new(MstQb),
        "exact" => Box::new(ExactQb::default()),
        _ => Box::new(AutoQb::default()),
    }
}

struct Run {
    solver: String,
    size: usize,
    bound: Option<Rational>,
    nodes: u64,
    valid: bool,
}

fn run_trial(cell: &Cell, inst: &Instance, seed: u64) -> Result<Run> {
    match (cell.problem, inst) {
        (Problem::Vc, Instance::Graph(g)) => {
            let r = vc::solve_vc(g, seed, 1, cell.a, cell.epsilon)?;
            Ok(Run {
                solver: "ii-modified".into(),
                size: r.solution.size(),
                bound: r.solution.certified_ratio_bound,
                nodes: r.nodes_explored,
                valid: g.is_vertex_cover(&r.solution.cover),
            })
        }
        (Problem::Cvc, Instance::Graph(g)) => {
            let qb = qb_for(&cell.qb);
            let r = cvc::solve_cvc(g, seed, 1, cell.a, cell.epsilon, qb.as_ref())?;
            let valid = cvc::ConnectedCoverSolution::new(g, r.solution.cover.clone(), None).is_ok();
            Ok(Run {
                solver: format!("scvc-{}", qb.name()),
                size: r.solution.size(),
                bound: r.solution.certified_ratio_bound,
                nodes: 0,
                valid,
            })
        }
        (Problem::Sc, Instance::SetCover(s)) => {
            let psi = setcover::density_psi_sc(s)?;
            if cell.mode == "exact" {
                let out = setcover::exact_bounded_sc(s, cell.budget)?;
                let (nodes, bound) = match &out {
                    setcover::ExactOutcome::Optimal { families_checked, .. } => {
                        (*families_checked, Some(Rational::from_integer(1)))
                    }
                    setcover::ExactOutcome::BudgetExceeded { .. } => (0, None),
                };
                let chosen = &out.solution().chosen;
                Ok(Run {
                    solver: "exact-bounded".into(),
                    size: chosen.len(),
                    bound,
                    nodes,
                    valid: s.covers(chosen),
                })
            } else {
                let sol = setcover::greedy_sc(s)?;
                // A cover of size at most ceil(ψ ln n) is within that many
                // times any optimum of size >= 1.
                let bound = (psi >= Rational::from_integer(2)).then(|| {
                    Rational::from_integer(setcover::greedy_bound(psi, s.ground_size()) as u64)
                });
                Ok(Run {
                    solver: "greedy".into(),
                    size: sol.size(),
                    bound,
                    nodes: sol.size() as u64,
                    valid: s.covers(&sol.chosen),
                })
            }
        }
        (Problem::St, Instance::Steiner(s)) => {
            let params = MdstpParams::for_instance(s, cell.delta)?;
            let r = steiner::mdstp(s, &params)?;
            let valid = SteinerTreeSolution::new(s, r.solution.tree_edges.clone()).is_ok();
            Ok(Run {
                solver: "mdstp".into(),
                size: r.solution.cost(),
                bound: r.certified_bound,
                nodes: r.stars.len() as u64,
                valid,
            })
        }
        _ => unreachable!("instance kind follows the problem"),
    }
}

fn empirical(size: usize, opt: Option<usize>) -> Option<Rational> {
    match opt {
        Some(0) if size == 0 => Some(Rational::from_integer(1)),
        Some(0) | None => None,
        Some(o) => Some(Rational::new(size as u64, o as u64)),
    }
}

/// Runs every cell and returns reports in canonical order.
pub fn run_matrix(cells: &[Cell]) -> Result<BenchOutcome> {
    let mut outcome = BenchOutcome::default();
    for (c, cell) in cells.iter().enumerate() {
        let instances: Vec<(usize, Instance, Option<usize>)> = (0..cell.instances)
            .into_par_iter()
            .map(|i| {
                let inst = generate(cell, mix(cell.spec.seed ^ c as u64, i as u64))?;
                let opt = oracle(cell, &inst);
                Ok((i, inst, opt))
            })
            .collect::<Result<_>>()?;
        let jobs: Vec<(usize, u64)> = (0..cell.instances)
            .flat_map(|i| (0..cell.seeds as u64).map(move |s| (i, s)))
            .collect();
        let reports: Vec<TrialReport> = jobs
            .par_iter()
            .map(|&(i, s)| {
                let (_, inst, opt) = &instances[i];
                let seed = mix(cell.spec.seed.wrapping_add(s), 0xC0FFEE ^ i as u64);
                let start = Instant::now();
                let run = run_trial(cell, inst, seed)?;
                let wall_ms = start.elapsed().as_millis() as u64;
                let empirical_ratio = empirical(run.size, *opt);
                let bound_violated = matches!(
                    (empirical_ratio, run.bound),
                    (Some(e), Some(b)) if e > b
                );
                Ok(TrialReport {
                    kind: "trial",
                    problem: cell.problem,
                    instance_id: format!("cell{c}-inst{i}"),
                    solver: run.solver,
                    seed,
                    solution_size: run.size,
                    oracle_optimum: *opt,
                    empirical_ratio,
                    certified_bound: run.bound,
                    nodes_or_states: run.nodes,
                    wall_ms,
                    valid: run.valid,
                    bound_violated,
                })
            })
            .collect::<Result<_>>()?;
        outcome.summaries.push(summarize(c, cell.problem, &reports));
        outcome.reports.extend(reports);
    }
    Ok(outcome)
}

fn summarize(cell: usize, problem: Problem, reports: &[TrialReport]) -> CellSummary {
    let ratios: Vec<f64> = reports
        .iter()
        .filter_map(|r| r.empirical_ratio.as_ref().map(ratio::to_f64))
        .collect();
    CellSummary {
        kind: "summary",
        cell,
        problem,
        reports: reports.len(),
        with_oracle: ratios.len(),
        mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
        max_ratio: ratios.iter().copied().reduce(f64::max),
        bound_violations: reports.iter().filter(|r| r.bound_violated).count(),
        invalid: reports.iter().filter(|r| !r.valid).count(),
    }
}

/// Writes reports as JSON lines, each cell followed by its summary.
pub fn write_jsonl(outcome: &BenchOutcome, out: &mut impl Write) -> std::io::Result<()> {
    let mut reports = outcome.reports.iter().peekable();
    for summary in &outcome.summaries {
        let prefix = format!("cell{}-", summary.cell);
        while let Some(r) = reports.next_if(|r| r.instance_id.starts_with(&prefix)) {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
        writeln!(out, "{}", serde_json::to_string(summary)?)?;
    }
    Ok(())
}

/// Plain-text table of the summaries.
pub fn format_table(outcome: &BenchOutcome) -> String {
    let mut s = format!(
        "{:<5} {:<8} {:>8} {:>8} {:>10} {:>10} {:>10} {:>8}\n",
        "cell", "problem", "reports", "oracle", "mean", "max", "violations", "invalid"
    );
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
    for c in &outcome.summaries {
        s.push_str(&format!(
            "{:<5} {:<8} {:>8} {:>8} {:>10} {:>10} {:>10} {:>8}\n",
            c.cell,
            format!("{:?}", c.problem).to_lowercase(),
            c.reports,
            c.with_oracle,
            fmt(c.mean_ratio),
            fmt(c.max_ratio),
            c.bound_violations,
            c.invalid
        ));
    }
    s
}
