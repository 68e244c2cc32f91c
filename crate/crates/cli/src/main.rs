use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subdense::bench;
use subdense::cvc::{self, AutoQb, ExactQb, MstQb, QbSteinerSolver};
use subdense::io;
use subdense::ratio::{self, Rational};
use subdense::reductions::{self, ReductionCertificate};
use subdense::setcover::{self, ExactOutcome};
use subdense::steiner::{self, MdstpParams};
use subdense::testbed::{self, GenSpec};
use subdense::vc;

#[derive(Parser)]
#[command(name = "subdense", version, about = "Approximation algorithms for subdense covering and Steiner problems")]
struct Cli {
    /// Master seed for generators and randomized solvers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print a JSON report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Search budget for exact set cover.
    #[arg(long, global = true, default_value_t = setcover::DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dense instance.
    Gen(GenArgs),
    /// Vertex cover by recursive sampling.
    SolveVc(VcArgs),
    /// Connected vertex cover.
    SolveCvc(CvcArgs),
    /// Set cover, greedy or exact.
    SolveSc(ScArgs),
    /// Steiner tree by star contraction.
    SolveSt(StArgs),
    /// Instance reductions with JSON certificate sidecars.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Exact optimum by exhaustive search (small instances only).
    Oracle(OracleArgs),
    /// Run a benchmark matrix and emit JSON lines.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Vc,
    Sc,
    St,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    n: usize,
    /// Density parameter, e.g. `3` or `5/2`.
    #[arg(long)]
    psi: String,
    /// Planted cover fraction (vc).
    #[arg(long)]
    rho: Option<String>,
    /// Number of sets (sc).
    #[arg(long)]
    sets: Option<usize>,
    /// Number of terminals (st).
    #[arg(long)]
    terminals: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VcArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value = "1/10")]
    epsilon: String,
    #[arg(long, default_value = "1")]
    a: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum QbKind {
    Mst,
    Exact,
    Auto,
}

#[derive(Args)]
struct CvcArgs {
    #[command(flatten)]
    vc: VcArgs,
    #[arg(long, value_enum, default_value_t = QbKind::Auto)]
    qb: QbKind,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScMode {
    Greedy,
    Exact,
}

#[derive(Args)]
struct ScArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ScMode::Greedy)]
    mode: ScMode,
}

#[derive(Args)]
struct StArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "1/2")]
    delta: String,
    /// Density parameter; the tightest value of the instance when omitted.
    #[arg(long)]
    psi: Option<String>,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Vertex cover (DIMACS) to Steiner tree (STP).
    VcToSt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Certificate path; defaults to `<output>.cert.json`.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Densify a Steiner instance (STP to STP).
    Densify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Vc,
    Cvc,
    Sc,
    St,
}

#[derive(Args)]
struct OracleArgs {
    kind: OracleKind,
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON array of cell objects.
    #[arg(long)]
    matrix: PathBuf,
    /// Write JSON lines here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also print a summary table (to stderr when JSON goes to stdout).
    #[arg(long)]
    table: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn rational(text: &str, what: &str) -> Result<Rational> {
    ratio::parse_rational(text).with_context(|| format!("invalid {what} {text:?}"))
}

fn opt_f64(r: Option<Rational>) -> Value {
    r.map_or(Value::Null, |r| json!(ratio::to_f64(&r)))
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Prints `report` as JSON, or its `text` rendering.
fn emit(json_out: bool, report: &Value, text: impl FnOnce() -> String) {
    if json_out {
        println!("{report}");
    } else {
        println!("{}", text());
    }
}

fn gen(cli: &Cli, args: &GenArgs) -> Result<()> {
    let mut spec = GenSpec::new(args.n, rational(&args.psi, "psi")?, cli.seed);
    if let Some(rho) = &args.rho {
        spec = spec.with_rho(rational(rho, "rho")?);
    }
    if let Some(m) = args.sets {
        spec = spec.with_sets(m);
    }
    if let Some(t) = args.terminals {
        spec = spec.with_terminals(t);
    }
    let text = match args.kind {
        GenKind::Vc => io::write_dimacs(&testbed::gen_subdense_graph(&spec)?.0),
        GenKind::Sc => io::write_setcover(&testbed::gen_dense_setcover(&spec)?),
        GenKind::St => io::write_stp(&testbed::gen_dense_steiner(&spec)?),
    };
    match &args.out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_vc(cli: &Cli, args: &VcArgs) -> Result<()> {
    let g = io::read_dimacs(&read(&args.input)?)?;
    let start = Instant::now();
    let run = vc::solve_vc(
        &g,
        cli.seed,
        args.trials,
        rational(&args.a, "a")?,
        rational(&args.epsilon, "epsilon")?,
    )?;
    let report = json!({
        "size": run.solution.size(),
        "cover": run.solution.cover,
        "certified_bound": opt_f64(run.solution.certified_ratio_bound),
        "trials": run.trials,
        "best_seed": run.best_seed,
        "nodes_explored": run.nodes_explored,
        "wall_ms": elapsed_ms(start),
    });
    emit(cli.json, &report, || {
        format!(
            "vertex cover of size {} ({} trials, {} nodes)\n{}",
            run.solution.size(),
            run.trials,
            run.nodes_explored,
            join(&run.solution.cover)
        )
    });
    Ok(())
}

fn solve_cvc(cli: &Cli, args: &CvcArgs) -> Result<()> {
    let g = io::read_dimacs(&read(&args.vc.input)?)?;
    let qb: &dyn QbSteinerSolver = match args.qb {
        QbKind::Mst => &MstQb,
        QbKind::Exact => &ExactQb::default(),
        QbKind::Auto => &AutoQb::default(),
    };
    let start = Instant::now();
    let run = cvc::solve_cvc(
        &g,
        cli.seed,
        args.vc.trials,
        rational(&args.vc.a, "a")?,
        rational(&args.vc.epsilon, "epsilon")?,
        qb,
    )?;
    let report = json!({
        "size": run.solution.size(),
        "cover": run.solution.cover,
        "certified_bound": opt_f64(run.solution.certified_ratio_bound),
        "trials": run.trials,
        "best_seed": run.best_seed,
        "qb": run.qb,
        "spanning_tree": run.solution.spanning_tree,
        "wall_ms": elapsed_ms(start),
    });
    emit(cli.json, &report, || {
        format!(
            "connected vertex cover of size {} (qb {})\n{}",
            run.solution.size(),
            run.qb,
            join(&run.solution.cover)
        )
    });
    Ok(())
}

fn solve_sc(cli: &Cli, args: &ScArgs) -> Result<()> {
    let inst = io::read_setcover(&read(&args.input)?)?;
    let start = Instant::now();
    let psi = setcover::density_psi_sc(&inst)?;
    let (solution, optimal, budget_note) = match args.mode {
        ScMode::Greedy => (setcover::greedy_sc(&inst)?, false, Value::Null),
        ScMode::Exact => match setcover::exact_bounded_sc(&inst, cli.budget)? {
            ExactOutcome::Optimal { solution, .. } => (solution, true, Value::Null),
            ExactOutcome::BudgetExceeded { greedy, required, budget } => (
                greedy,
                false,
                json!({ "required": required.to_string(), "budget": budget }),
            ),
        },
    };
    let report = json!({
        "size": solution.size(),
        "chosen": solution.chosen,
        "optimal": optimal,
        "psi": ratio::to_f64(&psi),
        "size_bound": setcover::greedy_bound(psi, inst.ground_size()),
        "budget_exceeded": budget_note,
        "wall_ms": elapsed_ms(start),
    });
    emit(cli.json, &report, || {
        let tag = if optimal { "optimal" } else { "greedy" };
        format!("{tag} set cover of size {}\n{}", solution.size(), join(&solution.chosen))
    });
    Ok(())
}

fn solve_st(cli: &Cli, args: &StArgs) -> Result<()> {
    let inst = io::read_stp(&read(&args.input)?)?;
    let delta = rational(&args.delta, "delta")?;
    let params = match &args.psi {
        Some(p) => MdstpParams::new(delta, rational(p, "psi")?)?,
        None => MdstpParams::for_instance(&inst, delta)?,
    };
    let start = Instant::now();
    let report = steiner::mdstp(&inst, &params)?;
    let out = json!({
        "cost": report.solution.cost(),
        "tree_edges": report.solution.tree_edges,
        "phase1_stars": report.stars,
        "stars_used": report.stars_used(),
        "exact_terminals": report.exact_terminals,
        "density_validated": report.density_validated,
        "stop_threshold": params.stop_threshold,
        "certified_bound": opt_f64(report.certified_bound),
        "wall_ms": elapsed_ms(start),
    });
    emit(cli.json, &out, || {
        format!(
            "Steiner tree of cost {} ({} stars contracted, {} terminals solved exactly)",
            report.solution.cost(),
            report.stars_used(),
            report.exact_terminals
        )
    });
    Ok(())
}

fn certificate_path(output: &Path, given: &Option<PathBuf>) -> PathBuf {
    given.clone().unwrap_or_else(|| {
        let mut name = output.as_os_str().to_owned();
        name.push(".cert.json");
        PathBuf::from(name)
    })
}

fn reduce(cli: &Cli, cmd: &ReduceCommand) -> Result<()> {
    let (inst, cert, output, cert_path, mut report) = match cmd {
        ReduceCommand::VcToSt { input, output, certificate } => {
            let g = io::read_dimacs(&read(input)?)?;
            let (inst, cert) = reductions::vc_to_steiner(&g)?;
            let report = json!({ "reduction": "vc-to-st", "hardness_note": reductions::HARDNESS_NOTE });
            (inst, cert, output, certificate_path(output, certificate), report)
        }
        ReduceCommand::Densify { input, delta, output, certificate } => {
            let source = io::read_stp(&read(input)?)?;
            let (inst, cert) = reductions::densify(&source, rational(delta, "delta")?)?;
            let report = json!({ "reduction": "densify" });
            (inst, cert, output, certificate_path(output, certificate), report)
        }
    };
    write(output, &io::write_stp(&inst))?;
    write(&cert_path, &cert.to_json())?;
    let k = match &cert {
        ReductionCertificate::Densify { k, .. } => Some(*k),
        ReductionCertificate::VcToSteiner { .. } => None,
    };
    report["nodes"] = json!(inst.graph.n());
    report["edges"] = json!(inst.graph.edge_count());
    report["terminals"] = json!(inst.terminals.len());
    report["k"] = json!(k);
    report["output"] = json!(output.display().to_string());
    report["certificate"] = json!(cert_path.display().to_string());
    emit(cli.json, &report, || {
        format!(
            "wrote {} ({} nodes, {} edges, {} terminals) and {}",
            output.display(),
            inst.graph.n(),
            inst.graph.edge_count(),
            inst.terminals.len(),
            cert_path.display()
        )
    });
    Ok(())
}

fn oracle(cli: &Cli, args: &OracleArgs) -> Result<()> {
    let text = read(&args.input)?;
    let start = Instant::now();
    let (problem, optimum) = match args.kind {
        OracleKind::Vc => ("vc", testbed::brute_vc(&io::read_dimacs(&text)?)?),
        OracleKind::Cvc => ("cvc", testbed::brute_cvc(&io::read_dimacs(&text)?)?),
        OracleKind::Sc => ("sc", testbed::brute_sc(&io::read_setcover(&text)?)?),
        OracleKind::St => ("st", testbed::brute_steiner(&io::read_stp(&text)?)?),
    };
    let report = json!({ "problem": problem, "optimum": optimum, "wall_ms": elapsed_ms(start) });
    emit(cli.json, &report, || format!("{problem} optimum: {optimum}"));
    Ok(())
}

/// Returns whether every solution was valid.
fn run_bench(cli: &Cli, args: &BenchArgs) -> Result<bool> {
    let mut cells = bench::parse_matrix(&read(&args.matrix)?)
        .with_context(|| format!("parsing {}", args.matrix.display()))?;
    for cell in &mut cells {
        cell.spec.seed = cell.spec.seed.wrapping_add(cli.seed);
    }
    let outcome = bench::run_matrix(&cells)?;
    let mut lines = Vec::new();
    bench::write_jsonl(&outcome, &mut lines)?;
    match &args.output {
        Some(path) => fs::write(path, &lines).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", String::from_utf8(lines)?),
    }
    if args.table {
        let table = bench::format_table(&outcome);
        if args.output.is_some() {
            print!("{table}");
        } else {
            eprint!("{table}");
        }
    }
    Ok(!outcome.any_invalid())
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gen(args) => gen(cli, args)?,
        Command::SolveVc(args) => solve_vc(cli, args)?,
        Command::SolveCvc(args) => solve_cvc(cli, args)?,
        Command::SolveSc(args) => solve_sc(cli, args)?,
        Command::SolveSt(args) => solve_st(cli, args)?,
        Command::Reduce(cmd) => reduce(cli, cmd)?,
        Command::Oracle(args) => oracle(cli, args)?,
        Command::Bench(args) => {
            if !run_bench(cli, args)? {
                eprintln!("error: at least one solution failed validation");
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn certificate_defaults_next_to_output() {
        assert_eq!(
            certificate_path(Path::new("out/g.stp"), &None),
            PathBuf::from("out/g.stp.cert.json")
        );
    }

    #[test]
    fn rationals_parse_with_context() {
        assert_eq!(rational("3/2", "psi").unwrap(), Rational::new(3, 2));
        assert!(rational("x", "psi").is_err());
    }
}
