//! The `lazycost` command-line tool.
//!
//! Exit codes: 0 when every check passes, 1 on a property violation, 2 on a
//! usage or parse error, 3 when a resource cap stopped a check.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lazycost::queues::{self, OpReport, QueueOp};
use lazycost::report::Report;
use lazycost::suites::{self, ListFn, Outcome};
use lazycost::syntax::{self, pretty};
use lazycost::ParseError;
use lazycost_core::calculus::Program;
use lazycost_core::clairvoyant::{cv_enumerate, CvError, DEFAULT_CAP};
use lazycost_core::demand::Analyzed;
use lazycost_core::eval::eval;
use lazycost_core::lattice::{exact, less_defined, ApproxValue, DemandEnv};
use lazycost_core::theorems::{CheckError, Selection};
use lazycost_core::trace::{
    check_trace, demand_trace, eval_trace, render_table, Banker, Budgets, Implicit, QueueImpl, TraceError,
    DEFAULT_STATE_CAP,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "lazycost",
    version,
    about = "Demand semantics and amortized cost checks for lazy programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a program.
    Check {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a program on total inputs.
    Eval {
        file: PathBuf,
        /// Input bindings, e.g. `xs=[1,2,3] ys=[4]`.
        #[arg(long, default_value = "")]
        env: String,
        #[command(flatten)]
        out: Output,
    },
    /// Cost and input demand of an output demand.
    Demand {
        file: PathBuf,
        #[arg(long, default_value = "")]
        env: String,
        /// Demand literal on the result, e.g. `(cons (thunk 1) _)`.
        #[arg(long)]
        out_demand: String,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate clairvoyant executions, or find the cheapest one producing
    /// at least `--out-demand`.
    Clairvoyant {
        file: PathBuf,
        /// Bindings of total values or demand literals; a total value stands
        /// for its fully evaluated approximation.
        #[arg(long, default_value = "")]
        env: String,
        #[arg(long)]
        out_demand: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_branches: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Check the correspondence theorems and demand lemmas exhaustively on
    /// small inputs.
    Xcheck {
        file: PathBuf,
        /// Longest input list.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Number of distinct natural-number elements.
        #[arg(long, default_value_t = 2)]
        values: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_branches: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Cost of one list function call against its bounds.
    StdlibCost {
        #[arg(long = "fn", value_enum)]
        function: ListFn,
        /// `N LIST` (count, element or fuel, then the list); `isort` and
        /// `ssort` also accept just `LIST`.
        #[arg(long)]
        args: String,
        #[arg(long)]
        out_demand: String,
        #[command(flatten)]
        out: Output,
    },
    /// One queue operation against its amortized bound.
    Queue {
        #[arg(long = "impl", value_enum)]
        implementation: QueueKind,
        /// `push X` or `pop`.
        #[arg(long)]
        op: String,
        /// File holding the queue state.
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out_demand: String,
        #[command(flatten)]
        out: Output,
    },
    /// Amortized and persistent cost checks on traces.
    Trace {
        #[command(subcommand)]
        command: TraceCommand,
    },
}

#[derive(Subcommand)]
enum TraceCommand {
    /// Check one trace file or every trace up to a length.
    Check {
        #[arg(long = "impl", value_enum)]
        implementation: QueueKind,
        #[arg(long, conflicts_with = "enumerate", required_unless_present = "enumerate")]
        file: Option<PathBuf>,
        /// Check every trace of at most this many events over two values.
        #[arg(long)]
        enumerate: Option<usize>,
        /// Reject events that refer to missing versions instead of skipping
        /// them.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Print the demand on every version after every event of a trace.
    Table {
        #[arg(long = "impl", value_enum)]
        implementation: QueueKind,
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QueueKind {
    Banker,
    Implicit,
}

/// Why a command stopped, mapped onto the exit codes.
enum Failure {
    Violation(String),
    Usage(String),
    Cap(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Cv(e @ CvError::TooManyBranches { .. }) => Failure::Cap(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CvError> for Failure {
    fn from(e: CvError) -> Self {
        CheckError::Cv(e).into()
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Program, Failure> {
    syntax::program(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Prints the result and turns a failed check into its exit code.
fn finish<R: Serialize>(
    json: bool,
    command: &str,
    result: R,
    text: String,
    counterexample: Option<String>,
    cap: Option<String>,
) -> Result<(), Failure> {
    if json {
        println!(
            "{}",
            Report::new(command, result, counterexample.clone()).to_json()
        );
    } else {
        print!("{text}");
        if !text.is_empty() && !text.ends_with('\n') {
            println!();
        }
    }
    match (cap, counterexample) {
        (Some(c), _) => Err(Failure::Cap(c)),
        (None, Some(c)) => Err(Failure::Violation(c)),
        (None, None) => Ok(()),
    }
}

fn outcome_text(o: &Outcome) -> String {
    let mut s = format!(
        "{}: {} ({} checks",
        o.suite,
        if o.passed() { "pass" } else { "FAIL" },
        o.checked
    );
    if let Some(w) = o.worst_slack {
        s += &format!(", worst slack {w}");
    }
    s += ")\n";
    for (p, n) in &o.properties {
        s += &format!("  {p}: {n}\n");
    }
    if let Some(c) = &o.counterexample {
        s += &format!("  {} violation(s); first: {c}\n", o.violations);
    }
    if let Some(c) = &o.resource_cap {
        s += &format!("  stopped: {c}\n");
    }
    s
}

fn finish_outcome(json: bool, command: &str, o: Outcome) -> Result<(), Failure> {
    let text = outcome_text(&o);
    let (cx, cap) = (o.counterexample.clone(), o.resource_cap.clone());
    finish(json, command, o, text, cx, cap)
}

/// Bindings for the clairvoyant semantics: a total value stands for its
/// exact approximation at the declared type.
fn approx_env(prog: &Program, src: &str) -> Result<DemandEnv, Failure> {
    let tys = prog.ty_env();
    let mut out = DemandEnv::new();
    for (x, text) in syntax::bindings(src)? {
        let ty = tys
            .get(&x)
            .ok_or_else(|| Failure::Usage(format!("`{x}` is not a parameter")))?;
        let a = match syntax::total(text) {
            Ok(v) => exact(&v, ty),
            Err(_) => syntax::demand(text)?,
        };
        out.insert(x, a);
    }
    if let Some((x, _)) = tys.iter().find(|(x, _)| !out.contains_key(*x)) {
        return Err(Failure::Usage(format!("no binding for `{x}`")));
    }
    Ok(out)
}

fn check_bindings(prog: &Program, env: &str) -> Result<lazycost_core::lattice::ValueEnv, Failure> {
    let g = syntax::env(env)?;
    for (x, _) in &prog.params {
        if !g.contains_key(x) {
            return Err(Failure::Usage(format!("no binding for `{x}`")));
        }
    }
    if let Some(x) = g.keys().find(|x| !prog.params.iter().any(|(p, _)| p == *x)) {
        return Err(Failure::Usage(format!("`{x}` is not a parameter")));
    }
    Ok(g)
}

#[derive(Serialize)]
struct DemandResult {
    cost: u64,
    demands: BTreeMap<String, String>,
    pretty: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Branch {
    cost: u64,
    result: String,
}

#[derive(Serialize)]
struct StdlibResult {
    function: ListFn,
    arg: u32,
    list: Vec<u32>,
    cost: u64,
    input_demand: String,
    bounds: BTreeMap<String, u64>,
    holds: bool,
}

#[derive(Serialize)]
struct TraceResult {
    passed: bool,
    clairvoyant_cost: u64,
    demand_cost: u64,
    budget: u64,
    slack: i64,
    failures: Vec<String>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { file, out } => {
            let p = load(&file)?;
            let ty = p.typecheck().map_err(|e| Failure::Usage(e.to_string()))?;
            let text = format!("{}: {ty}", file.display());
            finish(out.json, "check", ty.to_string(), text, None, None)
        }
        Command::Eval { file, env, out } => {
            let p = load(&file)?;
            let g = check_bindings(&p, &env)?;
            let ty = p.typecheck().map_err(|e| Failure::Usage(e.to_string()))?;
            let v = eval(&g, &p.body).map_err(|e| Failure::Usage(e.to_string()))?;
            let lit = exact(&v, &ty).to_string();
            finish(out.json, "eval", lit.clone(), lit, None, None)
        }
        Command::Demand {
            file,
            env,
            out_demand,
            out,
        } => {
            let p = load(&file)?;
            let g = check_bindings(&p, &env)?;
            let tys = p.ty_env();
            let a = Analyzed::new(&tys, &p.body).map_err(|e| Failure::Usage(e.to_string()))?;
            let d = a
                .demand(&g, &syntax::demand(&out_demand)?)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let result = DemandResult {
                cost: d.cost,
                demands: d.value.iter().map(|(x, a)| (x.clone(), a.to_string())).collect(),
                pretty: d.value.iter().map(|(x, a)| (x.clone(), pretty(a))).collect(),
            };
            let mut text = format!("cost {}\n", result.cost);
            for (x, a) in &result.pretty {
                text += &format!("{x}: {a}\n");
            }
            finish(out.json, "demand", result, text, None, None)
        }
        Command::Clairvoyant {
            file,
            env,
            out_demand,
            max_branches,
            out,
        } => {
            let p = load(&file)?;
            let g = approx_env(&p, &env)?;
            let branches = cv_enumerate(&g, &p.body, max_branches)?;
            let shown: Vec<Branch> = match &out_demand {
                None => branches
                    .iter()
                    .map(|(c, a)| Branch {
                        cost: *c,
                        result: a.to_string(),
                    })
                    .collect(),
                Some(d) => {
                    let d: ApproxValue = syntax::demand(d)?;
                    branches
                        .min_matching(|a| less_defined(&d, a))
                        .map(|(c, a)| Branch {
                            cost: *c,
                            result: a.to_string(),
                        })
                        .into_iter()
                        .collect()
                }
            };
            let text: String = if shown.is_empty() {
                "no execution produces the demanded output\n".into()
            } else {
                shown
                    .iter()
                    .map(|b| format!("{} {}\n", b.cost, b.result))
                    .collect()
            };
            finish(out.json, "clairvoyant", shown, text, None, None)
        }
        Command::Xcheck {
            file,
            max_len,
            values,
            max_branches,
            out,
        } => {
            let p = load(&file)?;
            let nats: Vec<u32> = (0..values).collect();
            let name = file.display().to_string();
            let o = suites::correspondence(&name, &p, max_len, &nats, max_branches, Selection::ALL)?;
            finish_outcome(out.json, "xcheck", o)
        }
        Command::StdlibCost {
            function,
            args,
            out_demand,
            out,
        } => {
            let (arg, xs) = stdlib_args(function, &args)?;
            let d = syntax::demand(&out_demand)?;
            let result = function.result(arg, &xs);
            if !less_defined(&d, &result) {
                return Err(Failure::Usage(format!(
                    "{d} does not approximate the result {}",
                    pretty(&result)
                )));
            }
            let r = function
                .demand(arg, &xs, &d)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let bounds: BTreeMap<String, u64> = function
                .bounds(arg, &xs, &d)
                .into_iter()
                .map(|(n, b)| (n.to_string(), b))
                .collect();
            let holds = bounds.values().all(|&b| r.cost <= b);
            let mut text = format!("cost {}\ninput demand: {}\n", r.cost, pretty(&r.value));
            for (n, b) in &bounds {
                text += &format!("{} {n} = {b}\n", if r.cost <= *b { "≤" } else { ">" });
            }
            let cx = (!holds).then(|| format!("cost {} exceeds a bound", r.cost));
            let result = StdlibResult {
                function,
                arg,
                list: xs,
                cost: r.cost,
                input_demand: r.value.to_string(),
                bounds,
                holds,
            };
            finish(out.json, "stdlib-cost", result, text, cx, None)
        }
        Command::Queue {
            implementation,
            op,
            state,
            out_demand,
            out,
        } => {
            let op: QueueOp = op.parse()?;
            let src = read(&state)?;
            let r = match implementation {
                QueueKind::Banker => queues::run_banker(&queues::banker_state(&src)?, op, &out_demand)?,
                QueueKind::Implicit => queues::run_implicit(&queues::implicit_state(&src)?, op, &out_demand)?,
            }
            .map_err(Failure::Usage)?;
            let text = op_text(&r);
            let cx = (!r.holds).then(|| {
                format!(
                    "cost {} + potential {} > budget {} + potential {}",
                    r.cost, r.potential_in, r.budget, r.potential_out
                )
            });
            finish(out.json, "queue", r, text, cx, None)
        }
        Command::Trace { command } => match command {
            TraceCommand::Check {
                implementation,
                file,
                enumerate,
                strict,
                out,
            } => match implementation {
                QueueKind::Banker => trace_check::<Banker>(file, enumerate, strict, out.json),
                QueueKind::Implicit => trace_check::<Implicit>(file, enumerate, strict, out.json),
            },
            TraceCommand::Table {
                implementation,
                file,
                out,
            } => match implementation {
                QueueKind::Banker => trace_table::<Banker>(&file, out.json),
                QueueKind::Implicit => trace_table::<Implicit>(&file, out.json),
            },
        },
    }
}

fn op_text(r: &OpReport) -> String {
    format!(
        "cost {}\ninput demand: {}\ncost + potential(in) = {} {} budget + potential(out) = {}\n",
        r.cost,
        r.input_demand,
        r.cost + r.potential_in,
        if r.holds { "≤" } else { ">" },
        r.budget + r.potential_out
    )
}

fn stdlib_args(f: ListFn, args: &str) -> Result<(u32, Vec<u32>), Failure> {
    let parts = syntax::split_values(args)?;
    let list = |s: &str| -> Result<Vec<u32>, Failure> {
        let v = syntax::total(s)?;
        let items = v
            .list_items()
            .ok_or_else(|| Failure::Usage(format!("`{s}` is not a list")))?;
        items
            .into_iter()
            .map(|x| match x {
                lazycost_core::lattice::TotalValue::NatV(n) => Ok(*n),
                _ => Err(Failure::Usage(format!("`{s}` is not a list of naturals"))),
            })
            .collect()
    };
    let nat = |s: &str| -> Result<u32, Failure> {
        s.parse()
            .map_err(|_| Failure::Usage(format!("expected a natural number, found `{s}`")))
    };
    match parts.as_slice() {
        [xs] if !f.uses_arg() => Ok((0, list(xs)?)),
        [xs] if f == ListFn::Ssort => {
            let xs = list(xs)?;
            Ok((xs.len() as u32, xs))
        }
        [n, xs] => Ok((nat(n)?, list(xs)?)),
        _ => Err(Failure::Usage(format!(
            "`--args` for {} is `N LIST`, found `{args}`",
            f.name()
        ))),
    }
}

fn trace_check<I: QueueImpl>(
    file: Option<PathBuf>,
    enumerate: Option<usize>,
    strict: bool,
    json: bool,
) -> Result<(), Failure> {
    let budgets: Budgets = I::budgets();
    if let Some(n) = enumerate {
        return finish_outcome(json, "trace check", suites::traces::<I>(n, &budgets));
    }
    let path = file.expect("clap requires --file or --enumerate");
    let t = queues::trace(&read(&path)?)?;
    match check_trace::<I>(&t, &budgets, strict, DEFAULT_STATE_CAP) {
        Ok(r) => {
            let failures: Vec<String> = r.failures.iter().map(|f| f.to_string()).collect();
            let cx = (!r.passed()).then(|| {
                format!(
                    "{}: {}",
                    queues::render_trace(&t).trim_end().replace('\n', "; "),
                    failures.join("; ")
                )
            });
            let text = format!(
                "{}: {} (clairvoyant cost {}, demand cost {}, budget {}, slack {})\n{}",
                I::name(),
                if r.passed() { "pass" } else { "FAIL" },
                r.clairvoyant_cost,
                r.demand_cost,
                r.budget,
                r.slack,
                failures.iter().map(|f| format!("  {f}\n")).collect::<String>()
            );
            let result = TraceResult {
                passed: r.passed(),
                clairvoyant_cost: r.clairvoyant_cost,
                demand_cost: r.demand_cost,
                budget: r.budget,
                slack: r.slack,
                failures,
            };
            finish(json, "trace check", result, text, cx, None)
        }
        Err(e @ TraceError::TooManyStates { .. }) => Err(Failure::Cap(e.to_string())),
        Err(e @ TraceError::InvalidEvent { .. }) => Err(Failure::Usage(e.to_string())),
        Err(e) => Err(Failure::Violation(e.to_string())),
    }
}

fn trace_table<I: QueueImpl>(file: &Path, json: bool) -> Result<(), Failure> {
    let t = queues::trace(&read(file)?)?;
    let ev = eval_trace::<I>(&t, false).map_err(|e| Failure::Usage(e.to_string()))?;
    let dt = demand_trace::<I>(&t, &ev).map_err(|e| Failure::Violation(e.to_string()))?;
    let rows = render_table::<I>(&ev, &dt);
    let text = rows.iter().map(|r| format!("{r}\n")).collect();
    finish(json, "trace table", rows, text, None, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(c)) => {
            eprintln!("violation: {c}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("resource cap: {m}");
            ExitCode::from(3)
        }
    }
}
