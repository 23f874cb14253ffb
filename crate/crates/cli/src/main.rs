use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use exclusivity::bounds::{bounds_report, lovasz_theta};
use exclusivity::graph::{enumerate_maximal_cliques, parse_graph6, EdgeListJson};
use exclusivity::ortho::{or_from_theta_witness, or_value, umbrella_or, verify_or, OrthonormalRepresentation};
use exclusivity::rational;
use exclusivity::scenario::{chsh_expression, kcbs_expression, SExpression, Scenario};
use exclusivity::sets::{in_qstab, in_stab, in_th, is_perfect, result3_check, ProbabilityAssignment};
use exclusivity::{Error, Execution, Graph, Settings};

mod output;

#[derive(Parser)]
#[command(name = "exclusivity", version, about = "Classical, quantum and exclusivity bounds on exclusivity graphs")]
struct Cli {
    /// Bracket width for the Lovász number and boundary band for membership.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Interior-point iteration budget.
    #[arg(long = "max-iter", global = true, default_value_t = 500)]
    max_iter: usize,
    /// Output format (JSON is the only one).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// α, ϑ and α* of a weighted graph.
    Bounds(GraphSource),
    /// Compile a scenario into its exclusivity graph.
    Scenario(ScenarioArgs),
    /// Membership of a probability vector in STAB, TH or QSTAB.
    Membership(MembershipArgs),
    /// Search for an induced odd hole or antihole.
    Perfect(PerfectArgs),
    /// Check an orthonormal representation and report its value.
    OrVerify(OrVerifyArgs),
    /// Extract an orthonormal representation from the theta solution.
    OrExtract(GraphSource),
    /// Dump the umbrella representation of an odd cycle.
    Umbrella {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Built-in S-graph of a named inequality.
    #[arg(long, value_enum, group = "source")]
    builtin: Option<Builtin>,
    /// Cycle C_n.
    #[arg(long, group = "source")]
    cycle: Option<usize>,
    /// Circulant graph: order, then comma-separated jumps.
    #[arg(long, num_args = 2, value_names = ["N", "JUMPS"], group = "source")]
    circulant: Option<Vec<String>>,
    /// graph6 string.
    #[arg(long, group = "source")]
    graph6: Option<String>,
    /// JSON edge list file {"n", "edges", "weights"?}.
    #[arg(long, group = "source")]
    edges: Option<String>,
}

#[derive(Args)]
struct GraphSource {
    #[command(flatten)]
    source: Source,
    /// Comma-separated rational vertex weights (overrides the source's).
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Chsh,
    Kcbs,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    scenario: Option<String>,
    /// Built-in scenario together with its inequality.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Expression JSON file {"terms": [{"weight", "event": {test: outcome}}]}.
    #[arg(long)]
    expression: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BodyArg {
    Stab,
    Th,
    Qstab,
}

#[derive(Args)]
struct MembershipArgs {
    #[command(flatten)]
    graph: GraphSource,
    #[arg(long, value_enum, ignore_case = true)]
    body: BodyArg,
    /// Comma-separated probabilities.
    #[arg(long, conflicts_with = "assignment", required_unless_present = "assignment")]
    p: Option<String>,
    /// JSON file holding an array of probabilities.
    #[arg(long)]
    assignment: Option<String>,
}

#[derive(Args)]
struct PerfectArgs {
    #[command(flatten)]
    graph: GraphSource,
    /// Also compare the bound triple along random weight directions.
    #[arg(long)]
    collapse: bool,
}

#[derive(Args)]
struct OrVerifyArgs {
    #[command(flatten)]
    graph: GraphSource,
    /// Representation JSON file {"dim", "handle", "vectors"}.
    #[arg(long = "or")]
    or_file: String,
}

/// A failure on the way to a report: `{"error": code, "detail": ...}`.
struct Failure {
    code: String,
    detail: String,
    exit: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = if matches!(e, Error::Nonconvergence { .. }) { 2 } else { 1 };
        Failure {
            code: e.code().to_string(),
            detail: e.to_string(),
            exit,
        }
    }
}

fn input_failure(code: &str, detail: impl Into<String>) -> Failure {
    Failure {
        code: code.to_string(),
        detail: detail.into(),
        exit: 1,
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_failure("io", format!("{path}: {e}")))
}

fn parse_list<T>(text: &str, item: impl Fn(&str) -> Result<T, Failure>) -> Result<Vec<T>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| item(s.trim())).collect()
}

fn parse_usize(text: &str) -> Result<usize, Failure> {
    text.parse().map_err(|_| input_failure("usage", format!("expected a nonnegative integer, got {text:?}")))
}

fn load_graph(args: &GraphSource) -> Result<Graph, Failure> {
    let s = &args.source;
    let g = if let Some(b) = s.builtin {
        builtin(b).1
    } else if let Some(n) = s.cycle {
        Graph::cycle(n)?
    } else if let Some(c) = &s.circulant {
        let n = parse_usize(&c[0])?;
        let jumps = parse_list(&c[1], parse_usize)?;
        Graph::circulant(n, &jumps)?
    } else if let Some(text) = &s.graph6 {
        parse_graph6(text)?
    } else if let Some(path) = &s.edges {
        Graph::from_json(&read_file(path)?)?
    } else {
        unreachable!("clap enforces one source")
    };
    match &args.weights {
        Some(w) => {
            let weights = parse_list(w, |x| rational::parse(x).map_err(Failure::from))?;
            Ok(g.with_weights(weights)?)
        }
        None => Ok(g),
    }
}

fn builtin(b: Builtin) -> (Scenario, Graph, SExpression) {
    let (scenario, expr) = match b {
        Builtin::Chsh => chsh_expression(),
        Builtin::Kcbs => kcbs_expression(),
    };
    let g = scenario.exclusivity_subgraph(&expr).expect("built-in expressions are valid");
    (scenario, g, expr)
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let settings = Settings {
        tol: cli.tol,
        max_iter: cli.max_iter,
        ..Settings::default()
    };
    settings.validate()?;
    Ok(settings)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn graph_json(g: &Graph) -> Value {
    to_value(&EdgeListJson::from_graph(g))
}

fn clique_histogram(g: &Graph) -> Value {
    let mut counts = std::collections::BTreeMap::new();
    for c in enumerate_maximal_cliques(g) {
        *counts.entry(c.len().to_string()).or_insert(0usize) += 1;
    }
    to_value(&counts)
}

fn cmd_scenario(args: &ScenarioArgs, settings: &Settings) -> Result<Value, Failure> {
    let (scenario, default_expr) = match (&args.scenario, args.builtin) {
        (Some(path), _) => (Scenario::from_json(&read_file(path)?)?, None),
        (None, Some(b)) => {
            let (s, _, e) = builtin(b);
            (s, Some(e))
        }
        (None, None) => unreachable!("clap requires a scenario"),
    };
    let expr = match &args.expression {
        Some(path) => Some(scenario.expression_from_json(&read_file(path)?)?),
        None => default_expr,
    };
    let (graph, events) = scenario.experiment_graph();
    let mut report = json!({
        "scenario": to_value(&scenario.to_json()),
        "graph": graph_json(&graph),
        "labels": events.iter().map(|e| scenario.label(e)).collect::<Vec<_>>(),
        "maximal_clique_sizes": clique_histogram(&graph),
    });
    if let Some(expr) = expr {
        let g = scenario.exclusivity_subgraph(&expr)?;
        let labels: Vec<String> = expr.terms().iter().map(|(_, e)| scenario.label(e)).collect();
        report["expression"] = json!({
            "terms": to_value(&scenario.expression_to_json(&expr).terms),
            "graph": graph_json(&g),
            "labels": labels,
            "bounds": bounds_report(&g, settings)?.to_json(),
        });
    }
    Ok(report)
}

fn load_assignment(args: &MembershipArgs) -> Result<ProbabilityAssignment, Failure> {
    let values = match (&args.p, &args.assignment) {
        (Some(list), _) => parse_list(list, |x| {
            x.parse::<f64>()
                .map_err(|_| input_failure("assignment", format!("not a number: {x:?}")))
        })?,
        (None, Some(path)) => serde_json::from_str::<Vec<f64>>(&read_file(path)?)
            .map_err(|e| input_failure("json", format!("{path}: {e}")))?,
        (None, None) => unreachable!("clap requires an assignment"),
    };
    Ok(ProbabilityAssignment::new(values)?)
}

fn cmd_membership(args: &MembershipArgs, settings: &Settings) -> Result<Value, Failure> {
    let g = load_graph(&args.graph)?;
    let p = load_assignment(args)?;
    let verdict = match args.body {
        BodyArg::Stab => in_stab(&g, &p, settings)?,
        BodyArg::Th => in_th(&g, &p, settings)?,
        BodyArg::Qstab => in_qstab(&g, &p)?,
    };
    Ok(to_value(&verdict))
}

fn cmd_perfect(args: &PerfectArgs, settings: &Settings) -> Result<Value, Failure> {
    let g = load_graph(&args.graph)?;
    let mut report = to_value(&is_perfect(&g, settings, Execution::Sequential)?);
    if args.collapse {
        report["collapse"] = to_value(&result3_check(&g, settings, Execution::Sequential)?);
    }
    Ok(report)
}

fn cmd_or_verify(args: &OrVerifyArgs, settings: &Settings) -> Result<Value, Failure> {
    let g = load_graph(&args.graph)?;
    let rep = OrthonormalRepresentation::from_json(&read_file(&args.or_file)?)?;
    let check = verify_or(&g, &rep, settings.tol)?;
    Ok(json!({
        "valid": check.valid,
        "value": or_value(&rep, &g.weights_f64()),
        "dim": rep.dim,
        "violations": to_value(&check.violations),
    }))
}

fn cmd_or_extract(args: &GraphSource, settings: &Settings) -> Result<Value, Failure> {
    let g = load_graph(args)?;
    let theta = lovasz_theta(&g, settings)?;
    let extraction = or_from_theta_witness(&g, &theta.witness, settings.tol)?;
    Ok(json!({
        "representation": to_value(&extraction.rep),
        "value": or_value(&extraction.rep, &g.weights_f64()),
        "theta": {"lower": theta.lower, "upper": theta.upper},
        "degenerate": extraction.degenerate,
        "rank": extraction.rank,
    }))
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let settings = settings(cli)?;
    match &cli.command {
        Command::Bounds(src) => Ok(bounds_report(&load_graph(src)?, &settings)?.to_json()),
        Command::Scenario(args) => cmd_scenario(args, &settings),
        Command::Membership(args) => cmd_membership(args, &settings),
        Command::Perfect(args) => cmd_perfect(args, &settings),
        Command::OrVerify(args) => cmd_or_verify(args, &settings),
        Command::OrExtract(args) => cmd_or_extract(args, &settings),
        Command::Umbrella { n } => Ok(to_value(&umbrella_or(*n)?)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let rendered = e.to_string();
            let detail: Vec<&str> = rendered.lines().take_while(|l| !l.is_empty()).map(str::trim).collect();
            let detail = detail.join(" ");
            let detail = detail.strip_prefix("error: ").unwrap_or(&detail);
            output::emit(&json!({"error": "usage", "detail": detail}));
            return ExitCode::from(1);
        }
    };
    let Format::Json = cli.format;
    match run(&cli) {
        Ok(report) => {
            output::emit(&report);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.detail);
            output::emit(&json!({"error": f.code, "detail": f.detail}));
            ExitCode::from(f.exit)
        }
    }
}
