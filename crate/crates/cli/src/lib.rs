//! Command-line front end. [`run`] takes the argument vector and output
//! streams so the whole interface can be exercised in-process.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 infeasible instance, 4 search budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use capdom::bench::{run_bench, to_csv, BenchConfig};
use capdom::hardness::{reduce, verify_structure, CliqueInstance};
use capdom::treewidth::{validate_nice, validate_td, NodeKind};
use capdom::{
    baker_solve, exact, greedy_splittable, greedy_unsplittable, greedy_unweighted_splittable, heuristic_decomposition,
    make_nice, random_instance, solve_td, verify_solution, DemandModel, Error, Instance, RandomParams, SearchBudget,
    Solution, TreeDecomposition,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "capdom", version, about = "Soft-capacitated domination solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance and print a verified solution.
    Solve(SolveArgs),
    /// Check a solution against an instance.
    Verify(VerifyArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Tree decomposition utilities.
    #[command(subcommand)]
    Td(TdCommand),
    /// Compare a greedy algorithm with the optimum over a seeded batch.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    GreedyUnsplit,
    GreedySplit,
    GreedyUnweighted,
    Dp,
    Baker,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Split,
    Unsplit,
}

impl From<ModelArg> for DemandModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Split => DemandModel::Splittable,
            ModelArg::Unsplit => DemandModel::Unsplittable,
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "greedy-unsplit")]
    algo: Algo,
    /// Defaults to the greedy's own model, otherwise unsplit.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Band parameter for baker.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Tree decomposition for dp in PACE format.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Append greedy trace lines.
    #[arg(long)]
    trace: bool,
    /// Node budget for the oracle.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    instance: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Defaults to the model named in the solution header.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    instance: PathBuf,
    solution: PathBuf,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Seeded random instance.
    Random(RandomArgs),
    /// Capacitated domination gadget of a multicolor clique instance.
    McqReduce(ReduceArgs),
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    max_w: i64,
    #[arg(long, default_value_t = 5)]
    max_c: i64,
    #[arg(long, default_value_t = 5)]
    max_d: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Role map destination; defaults to `<output>.roles`, or comment lines
    /// on standard output.
    #[arg(long)]
    roles: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    clique: PathBuf,
}

#[derive(Subcommand, Debug)]
enum TdCommand {
    /// Min-fill decomposition in PACE format.
    Compute {
        #[arg(short, long)]
        output: Option<PathBuf>,
        instance: PathBuf,
    },
    /// Check a decomposition against an instance.
    Validate { instance: PathBuf, td: PathBuf },
    /// Nice form of a decomposition (heuristic when `--td` is absent).
    Nice {
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        instance: PathBuf,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    batch: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "unsplit")]
    model: ModelArg,
    /// Unit weights and the unweighted greedy (splittable only).
    #[arg(long)]
    unweighted: bool,
    #[arg(long, default_value_t = 0.35)]
    p: f64,
    #[arg(long, default_value_t = 5)]
    max_w: i64,
    #[arg(long, default_value_t = 5)]
    max_c: i64,
    #[arg(long, default_value_t = 5)]
    max_d: i64,
    /// Largest n compared with the oracle; the DP is used above.
    #[arg(long, default_value_t = 9)]
    oracle_max_n: usize,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// A failure carrying its exit code.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::AboveBound(_) | Error::EmptyTable(_) => EXIT_INFEASIBLE,
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

type CliResult = Result<i32, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Fail> {
    read(path)?
        .parse()
        .map_err(|e: Error| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_td(path: &Path) -> Result<TreeDecomposition, Fail> {
    read(path)?
        .parse()
        .map_err(|e: Error| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Fail> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Fail(EXIT_USAGE, e.to_string())),
    }
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&a.instance)?;
    let natural = match a.algo {
        Algo::GreedyUnsplit => Some(DemandModel::Unsplittable),
        Algo::GreedySplit | Algo::GreedyUnweighted => Some(DemandModel::Splittable),
        _ => None,
    };
    let model: DemandModel = match (a.model.map(DemandModel::from), natural) {
        (Some(m), Some(n)) if m != n => {
            let name = a.algo.to_possible_value().expect("no skipped variants");
            return Err(Fail(EXIT_USAGE, format!("{} solves the {n} model only", name.get_name())));
        }
        (Some(m), _) => m,
        (None, Some(n)) => n,
        (None, None) => DemandModel::Unsplittable,
    };
    if a.td.is_some() && a.algo != Algo::Dp {
        return Err(Fail(EXIT_USAGE, "--td only applies to --algo dp".into()));
    }
    if a.trace && natural.is_none() {
        return Err(Fail(EXIT_USAGE, "--trace only applies to the greedy algorithms".into()));
    }
    let budget = a.budget.map_or_else(SearchBudget::default, SearchBudget::with_max_nodes);

    let mut comments = String::new();
    let mut trace = String::new();
    let sol: Solution = match a.algo {
        Algo::GreedyUnsplit | Algo::GreedySplit | Algo::GreedyUnweighted => {
            let outcome = match a.algo {
                Algo::GreedyUnsplit => greedy_unsplittable(&inst)?,
                Algo::GreedySplit => greedy_splittable(&inst)?,
                _ => greedy_unweighted_splittable(&inst)?,
            };
            if a.trace {
                trace = outcome.trace.to_string();
            }
            outcome.solution
        }
        Algo::Dp => {
            if inst.n() == 0 {
                Solution::empty(0)
            } else {
                let td = match &a.td {
                    Some(p) => load_td(p)?,
                    None => heuristic_decomposition(&inst),
                };
                let report = validate_td(&inst, &td);
                if !report.is_pass() {
                    return Err(Fail(EXIT_USAGE, format!("invalid decomposition\n{report}")));
                }
                comments.push_str(&format!("c width {}\n", td.width()));
                solve_td(&inst, &make_nice(&td)?, model)?
            }
        }
        Algo::Baker => {
            let outcome = baker_solve(&inst, a.k, model)?;
            comments.push_str(&format!("c levels {}\n", outcome.num_levels));
            for (r, cost) in outcome.shift_costs.iter().enumerate() {
                comments.push_str(&format!("c shift {r} cost {cost}\n"));
            }
            outcome.solution
        }
        Algo::Oracle => exact(&inst, model, budget)?,
    };

    let report = verify_solution(&inst, &sol, model);
    if !report.is_pass() {
        return Err(Fail(EXIT_VERIFY_FAIL, format!("internal error: solution failed verification\n{report}")));
    }
    let text = format!("{}{comments}{trace}", sol.to_text(model));
    emit(&a.output, &text, out)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&a.instance)?;
    let text = read(&a.solution)?;
    let (sol, stated) =
        Solution::parse(&text, &inst).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", a.solution.display())))?;
    let model = a.model.map_or(stated, DemandModel::from);
    let report = verify_solution(&inst, &sol, model);
    emit(&None, &report.to_string(), out)?;
    Ok(if report.is_pass() { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

fn gen(cmd: &GenCommand, out: &mut dyn Write) -> CliResult {
    match cmd {
        GenCommand::Random(a) => {
            if a.n == 0 || !(0.0..=1.0).contains(&a.p) {
                return Err(Fail(EXIT_USAGE, "need n >= 1 and 0 <= p <= 1".into()));
            }
            let params = RandomParams::new(a.n, a.p, a.max_w, a.max_c, a.max_d);
            emit(&a.output, &random_instance(&params, a.seed).to_text(), out)?;
        }
        GenCommand::McqReduce(a) => {
            let cq: CliqueInstance = read(&a.clique)?
                .parse()
                .map_err(|e: Error| Fail(EXIT_USAGE, format!("{}: {e}", a.clique.display())))?;
            let g = reduce(&cq)?;
            let report = verify_structure(&g);
            if !report.is_pass() {
                return Err(Fail(EXIT_VERIFY_FAIL, format!("gadget failed its audit\n{report}")));
            }
            let roles = g.roles_text(&cq);
            let mut text = format!("c budget {}\n{}", g.budget, g.instance.to_text());
            let sidecar = a
                .roles
                .clone()
                .or_else(|| a.output.as_ref().map(|o| PathBuf::from(format!("{}.roles", o.display()))));
            match sidecar {
                Some(p) => emit(&Some(p), &roles, out)?,
                None => {
                    for line in roles.lines() {
                        text.push_str(&format!("c {line}\n"));
                    }
                }
            }
            emit(&a.output, &text, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn td(cmd: &TdCommand, out: &mut dyn Write) -> CliResult {
    match cmd {
        TdCommand::Compute { output, instance } => {
            let inst = load_instance(instance)?;
            emit(output, &heuristic_decomposition(&inst).to_string(), out)?;
            Ok(EXIT_OK)
        }
        TdCommand::Validate { instance, td } => {
            let inst = load_instance(instance)?;
            let td = load_td(td)?;
            let report = validate_td(&inst, &td);
            let mut text = report.to_string();
            if report.is_pass() {
                text.push_str(&format!("width {}\n", td.width()));
            }
            emit(&None, &text, out)?;
            Ok(if report.is_pass() { EXIT_OK } else { EXIT_VERIFY_FAIL })
        }
        TdCommand::Nice { td, output, instance } => {
            let inst = load_instance(instance)?;
            let td = match td {
                Some(p) => load_td(p)?,
                None => heuristic_decomposition(&inst),
            };
            let ntd = make_nice(&td)?;
            let report = validate_nice(&inst, &ntd);
            if !report.is_pass() {
                emit(&None, &report.to_string(), out)?;
                return Ok(EXIT_VERIFY_FAIL);
            }
            let mut text = format!("c root {}\n", ntd.root + 1);
            for (i, node) in ntd.nodes.iter().enumerate() {
                let kind = match node.kind {
                    NodeKind::Leaf(v) => format!("leaf {}", v + 1),
                    NodeKind::Introduce(v) => format!("introduce {}", v + 1),
                    NodeKind::Forget(v) => format!("forget {}", v + 1),
                    NodeKind::Join => "join".to_string(),
                };
                text.push_str(&format!("c node {} {kind}\n", i + 1));
            }
            text.push_str(&ntd.project().to_string());
            emit(output, &text, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult {
    if a.unweighted && a.model == ModelArg::Unsplit {
        return Err(Fail(EXIT_USAGE, "--unweighted needs --model split".into()));
    }
    if a.n == 0 || !(0.0..=1.0).contains(&a.p) {
        return Err(Fail(EXIT_USAGE, "need n >= 1 and 0 <= p <= 1".into()));
    }
    let mut cfg = BenchConfig::new(a.n, a.batch, a.seed, a.model.into());
    cfg.params = RandomParams::new(a.n, a.p, a.max_w, a.max_c, a.max_d);
    cfg.unweighted = a.unweighted;
    cfg.oracle_max_n = a.oracle_max_n;
    if let Some(b) = a.budget {
        cfg.budget = SearchBudget::with_max_nodes(b);
    }
    let rows = run_bench(&cfg)?;
    emit(&a.output, &to_csv(&cfg, &rows), out)?;
    Ok(EXIT_OK)
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Gen(g) => gen(g, out),
        Command::Td(t) => td(t, out),
        Command::Bench(b) => bench(b, out),
    };
    match result {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "capdom: {msg}");
            code
        }
    }
}
