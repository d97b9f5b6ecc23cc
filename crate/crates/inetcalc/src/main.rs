//! inetcalc: run, trace, check and benchmark interaction-net programs.
//!
//! Exit codes: 0 for a (head) normal form, 2 when reduction blocks on a
//! rule-less active pair, 3 when the step limit is exceeded, 1 for usage,
//! parse or validation errors.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use inet::calculus::{reduce, reduce_head, reduce_head_traced, reduce_traced, SchedulerPolicy};
use inet::graph::{config_to_net, graph_reduce, net_from_json, net_to_config, net_to_json};
use inet::parser::{parse_system, print_configuration, SystemFile};
use inet::{stdlib, Configuration, Outcome, Stats};

const DEFAULT_LIMIT: u64 = 1_000_000;

/// Writes one line to stdout, reporting whether the consumer is still there
/// (piping into `head` must not crash the run).
fn emit(out: &mut impl Write, line: &str) -> bool {
    match writeln!(out, "{line}") {
        Ok(()) => true,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => false,
        Err(e) => {
            eprintln!("error: {e}");
            false
        }
    }
}

#[derive(Parser)]
#[command(name = "inetcalc", version, about = "An interaction-net runtime")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a net and print the result with statistics.
    Run(RunArgs),
    /// Reduce a net, printing one line per reduction step.
    Trace(RunArgs),
    /// Parse and validate files, reporting every diagnostic.
    Check { files: Vec<PathBuf> },
    /// Step-count tables for the shipped systems, as CSV.
    Bench {
        #[arg(value_enum)]
        profile: BenchProfile,
        /// Largest input size.
        #[arg(long, default_value_t = 8)]
        max: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Calculus,
    Graph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Full,
    Head,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Fifo,
    Lifo,
    Random,
    InteractionFirst,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchProfile {
    /// Difference-list append: constant cost at every size.
    DlistAppend,
    /// C/C* addition: constant cost for every pair of numbers.
    CstarAdd,
    /// Plain unary addition: cost linear in the first addend.
    NatAdd,
}

#[derive(Args)]
struct RunArgs {
    /// Input files: .inet systems and .json nets (a .json net needs the
    /// symbols of an accompanying .inet file and is named after its stem).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Net to reduce; defaults to the only net if there is exactly one.
    #[arg(long)]
    net: Option<String>,
    #[arg(long, value_enum, default_value_t = EngineArg::Calculus)]
    engine: EngineArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Full)]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = PolicyArg::Fifo)]
    policy: PolicyArg,
    /// Seed for --policy random.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of steps (default 1000000, or $INETCALC_LIMIT).
    #[arg(long)]
    limit: Option<u64>,
    /// Fair scheduling (graph engine only): oldest pair first, restricted to
    /// pairs that can still influence the interface.
    #[arg(long)]
    fair: bool,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// Print each reduction step (calculus engine only).
    #[arg(long)]
    trace: bool,
}

fn main() -> ExitCode {
    // usage errors exit 1; 2 and 3 are reserved for reduction outcomes
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Run(args) => cmd_run(args, false),
        Cmd::Trace(args) => cmd_run(args, true),
        Cmd::Check { files } => cmd_check(&files),
        Cmd::Bench { profile, max } => cmd_bench(profile, max),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// Parses and merges the input files; .json nets are decoded against the
/// merged signature and converted to configurations.
fn load(files: &[PathBuf]) -> Result<SystemFile, String> {
    let mut system = SystemFile::default();
    let mut json_nets: Vec<(String, serde_json::Value)> = Vec::new();
    for path in files {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let name = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("net")
                    .to_string();
                json_nets.push((name, value));
            }
            _ => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let parsed =
                    parse_system(&text).map_err(|e| format!("{}:{e}", path.display()))?;
                system
                    .merge(&parsed)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
        }
    }
    for (name, value) in json_nets {
        let net = net_from_json(&value, &system.signature).map_err(|e| format!("{name}.json: {e}"))?;
        if system.nets.insert(name.clone(), net_to_config(&net)).is_some() {
            return Err(format!("net {name} is defined twice"));
        }
    }
    Ok(system)
}

fn pick_net(system: &SystemFile, requested: &Option<String>) -> Result<Configuration, String> {
    match requested {
        Some(name) => system
            .nets
            .get(name)
            .cloned()
            .ok_or_else(|| format!("no net named {name}; available: {}", net_names(system))),
        None => {
            if system.nets.len() == 1 {
                Ok(system.nets.values().next().unwrap().clone())
            } else {
                Err(format!(
                    "pass --net to choose one of: {}",
                    net_names(system)
                ))
            }
        }
    }
}

fn net_names(system: &SystemFile) -> String {
    system.nets.keys().cloned().collect::<Vec<_>>().join(", ")
}

fn effective_limit(args: &RunArgs) -> Result<u64, String> {
    if let Some(limit) = args.limit {
        return Ok(limit);
    }
    match std::env::var("INETCALC_LIMIT") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("INETCALC_LIMIT must be a number, got {v:?}")),
        Err(_) => Ok(DEFAULT_LIMIT),
    }
}

fn cmd_run(args: RunArgs, force_trace: bool) -> Result<ExitCode, String> {
    let trace_on = force_trace || args.trace;
    let policy = match (args.policy, args.seed) {
        (PolicyArg::Random, seed) => SchedulerPolicy::RandomSeeded(seed.unwrap_or(0)),
        (_, Some(_)) => return Err("--seed only applies to --policy random".into()),
        (PolicyArg::Fifo, None) => SchedulerPolicy::Fifo,
        (PolicyArg::Lifo, None) => SchedulerPolicy::Lifo,
        (PolicyArg::InteractionFirst, None) => SchedulerPolicy::InteractionFirst,
    };
    if args.fair && args.engine != EngineArg::Graph {
        return Err("--fair only applies to --engine graph".into());
    }
    if args.engine == EngineArg::Graph && args.strategy == StrategyArg::Head {
        return Err("--strategy head is a calculus strategy; use --engine calculus".into());
    }
    if args.engine == EngineArg::Graph && trace_on {
        return Err("tracing is only available on the calculus engine".into());
    }
    let limit = effective_limit(&args)?;
    let system = load(&args.files)?;
    let config = pick_net(&system, &args.net)?;
    let violations = inet::validate(&system.signature, &system.rules, &config);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("error: {v}");
        }
        return Ok(ExitCode::from(1));
    }

    let (outcome_label, result_config, stats, pairs, final_net) = match args.engine {
        EngineArg::Calculus => {
            let run = |trace: bool| -> (Outcome, Vec<inet::TraceStep>) {
                match (args.strategy, trace) {
                    (StrategyArg::Full, false) => (
                        reduce(config.clone(), &system.signature, &system.rules, policy, limit),
                        Vec::new(),
                    ),
                    (StrategyArg::Full, true) => reduce_traced(
                        config.clone(),
                        &system.signature,
                        &system.rules,
                        policy,
                        limit,
                    ),
                    (StrategyArg::Head, false) => (
                        reduce_head(config.clone(), &system.signature, &system.rules, limit),
                        Vec::new(),
                    ),
                    (StrategyArg::Head, true) => {
                        reduce_head_traced(config.clone(), &system.signature, &system.rules, limit)
                    }
                }
            };
            let (outcome, trace) = run(trace_on);
            if trace_on && !args.json {
                let mut out = io::stdout().lock();
                for t in &trace {
                    let line = format!(
                        "step {:>4}  {:<24} {}",
                        t.index,
                        t.description,
                        print_configuration(&t.config)
                    );
                    if !emit(&mut out, &line) {
                        break;
                    }
                }
            }
            let pairs = match &outcome {
                Outcome::Blocked { pairs, .. } => pairs.clone(),
                _ => Vec::new(),
            };
            let net = config_to_net(outcome.config(), &system.signature);
            (
                outcome.label(),
                outcome.config().clone(),
                outcome.stats(),
                pairs,
                net,
            )
        }
        EngineArg::Graph => {
            let net = config_to_net(&config, &system.signature);
            let outcome = graph_reduce(
                net,
                &system.signature,
                &system.rules,
                policy,
                args.fair,
                limit,
            );
            let pairs = match &outcome {
                inet::GraphOutcome::Blocked { pairs, .. } => pairs.clone(),
                _ => Vec::new(),
            };
            (
                outcome.label(),
                net_to_config(outcome.net()),
                outcome.stats(),
                pairs,
                outcome.net().clone(),
            )
        }
    };

    if args.json {
        let mut doc = serde_json::json!({
            "outcome": outcome_label,
            "configuration": print_configuration(&result_config),
            "net": net_to_json(&final_net),
            "stats": stats.to_json(),
        });
        if !pairs.is_empty() {
            doc["blocked"] = serde_json::json!(pairs
                .iter()
                .map(|(a, b)| format!("{a} >< {b}"))
                .collect::<Vec<_>>());
        }
        println!("{doc}");
    } else {
        println!("{}", print_configuration(&result_config));
        println!("stats {}", stats.to_json());
        if !pairs.is_empty() {
            let list: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} >< {b}")).collect();
            println!("blocked: {}", list.join(", "));
        }
    }

    Ok(match outcome_label {
        "normal" | "head-normal" => ExitCode::from(0),
        "blocked" => ExitCode::from(2),
        "limit-exceeded" => ExitCode::from(3),
        _ => ExitCode::from(1),
    })
}

fn cmd_check(files: &[PathBuf]) -> Result<ExitCode, String> {
    if files.is_empty() {
        return Err("no input files".into());
    }
    let mut failed = false;
    for path in files {
        match check_one(path) {
            Ok(notes) => {
                println!("{}: ok", path.display());
                for note in notes {
                    println!("  note: {note}");
                }
            }
            Err(message) => {
                failed = true;
                eprintln!("{}: {message}", path.display());
            }
        }
    }
    Ok(ExitCode::from(if failed { 1 } else { 0 }))
}

fn check_one(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let system = parse_system(&text).map_err(|e| e.to_string())?;
    for (name, config) in &system.nets {
        let violations = inet::validate(&system.signature, &system.rules, config);
        if !violations.is_empty() {
            return Err(violations
                .iter()
                .map(|v| format!("net {name}: {v}"))
                .collect::<Vec<_>>()
                .join("\n"));
        }
    }
    Ok(system
        .rules
        .shadowed_schemas(&system.signature)
        .into_iter()
        .map(|(a, b)| format!("explicit rule for ({a}, {b}) shadows a builtin schema"))
        .collect())
}

fn cmd_bench(profile: BenchProfile, max: u64) -> Result<ExitCode, String> {
    let row = |stats: Stats| {
        format!(
            "{},{},{},{}",
            stats.interactions,
            stats.indirections,
            stats.collects,
            stats.total()
        )
    };
    match profile {
        BenchProfile::DlistAppend => {
            let sys = stdlib::dlist_profile().system;
            let mut out = io::stdout().lock();
            if !emit(&mut out, "size,interactions,indirections,collects,total") {
                return Ok(ExitCode::from(0));
            }
            for size in 1..=max {
                let xs: Vec<u64> = (0..size).collect();
                let outcome = reduce(
                    stdlib::dlist_append(&xs, &xs),
                    &sys.signature,
                    &sys.rules,
                    SchedulerPolicy::Fifo,
                    DEFAULT_LIMIT,
                );
                if !outcome.is_normal() {
                    return Err(format!("append of size {size} did not normalize"));
                }
                if !emit(&mut out, &format!("{size},{}", row(outcome.stats()))) {
                    break;
                }
            }
        }
        BenchProfile::CstarAdd | BenchProfile::NatAdd => {
            let (sys, build): (_, fn(u64, u64) -> Configuration) = match profile {
                BenchProfile::CstarAdd => (stdlib::cstar_profile().system, stdlib::cstar_add),
                _ => (stdlib::nat_profile().system, stdlib::add),
            };
            let mut out = io::stdout().lock();
            if !emit(&mut out, "m,n,interactions,indirections,collects,total") {
                return Ok(ExitCode::from(0));
            }
            'grid: for m in 0..=max {
                for n in 0..=max {
                    let outcome = reduce(
                        build(m, n),
                        &sys.signature,
                        &sys.rules,
                        SchedulerPolicy::Fifo,
                        DEFAULT_LIMIT,
                    );
                    if !outcome.is_normal() {
                        return Err(format!("{m}+{n} did not normalize"));
                    }
                    if !emit(&mut out, &format!("{m},{n},{}", row(outcome.stats()))) {
                        break 'grid;
                    }
                }
            }
        }
    }
    Ok(ExitCode::from(0))
}
