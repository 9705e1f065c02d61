//! The `qcsp` command line.
//!
//! Exit codes: 0 on success, 1 when a decision comes out negative (no
//! winning strategy, a rejected certificate, a failed check, a NO), 2 on
//! errors. `--json` switches every command to one JSON document on stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qcsp::oracle::count_winning_strategies;
use qcsp::{
    allowed_moves, answer_next_move_choice, certificate_of, check_compatibility, check_optimality, compile,
    enumerate_winning_strategies, extract_strategy, verify_certificate, BaseError, CompileError, CompileOptions,
    EnumLimits, ModelError, OracleError, Problem, Propagation, QcspBase, QueryError, StrategyTree, TieBreak, Value,
    Variable,
};
use serde_json::{json, Map, Value as JsonValue};

#[derive(Debug, Parser)]
#[command(name = "qcsp", version, about = "Compile quantified constraint problems and query the compiled bases")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Propagation during compilation: ground or gac.
    #[arg(long, default_value = "ground")]
    pub propagation: Propagation,
    /// Give up after this many recursive calls.
    #[arg(long)]
    pub budget: Option<u64>,
}

impl CompileArgs {
    fn options(&self) -> CompileOptions {
        CompileOptions { propagation: self.propagation, budget: self.budget }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a problem into a base.
    Compile {
        problem: PathBuf,
        /// Write the base here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        options: CompileArgs,
        /// Print compilation statistics.
        #[arg(long)]
        stats: bool,
    },
    /// Decide whether the existential player has a winning strategy.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        options: CompileArgs,
    },
    /// Count winning strategies.
    Count {
        problem: PathBuf,
        /// Enumerate at most this many strategies.
        #[arg(long)]
        limit: Option<usize>,
        /// Fail once enumeration has built this many partial strategies.
        #[arg(long)]
        budget: Option<u64>,
        /// Print the enumerated strategies.
        #[arg(long)]
        list: bool,
    },
    /// Allowed moves after a prefix, or whether another value was winning.
    Query {
        base: PathBuf,
        /// Moves played so far, e.g. `x=2,y=1` or `2,1`.
        #[arg(long, default_value = "")]
        prefix: String,
        /// Alternative to the last move of the prefix, e.g. `y=2`. Naming the
        /// next variable instead asks whether that move is winning now.
        #[arg(long)]
        alt: Option<String>,
    },
    /// Read one winning strategy off a base.
    Extract {
        base: PathBuf,
        #[arg(long, default_value = "min")]
        tie_break: TieBreak,
        /// Print the strategy as a certificate base.
        #[arg(long)]
        certificate: bool,
    },
    /// Check a certificate against a problem.
    Verify { certificate: PathBuf, problem: PathBuf },
    /// Check compatibility and optimality of a base for a problem.
    Check { base: PathBuf, problem: PathBuf },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "DATA_DIR", default_value = "data")]
        data_dir: PathBuf,
        /// Only this origin may call the API from a browser.
        #[arg(long, env = "CORS_ORIGIN")]
        cors_origin: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Problem { path: PathBuf, source: ModelError },
    #[error("{}: {source}", path.display())]
    Base { path: PathBuf, source: BaseError },
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Check(#[from] BaseError),
    #[error("{0}")]
    Usage(String),
}

/// Success with a positive or negative answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn load_problem(path: &Path) -> Result<Problem, CliError> {
    Problem::from_json(&read(path)?).map_err(|source| CliError::Problem { path: path.into(), source })
}

fn load_base(path: &Path) -> Result<QcspBase, CliError> {
    QcspBase::from_json(&read(path)?).map_err(|source| CliError::Base { path: path.into(), source })
}

fn write_out(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

/// Parses `x=2,y=1` (or bare `2,1`) against the binder, in order.
pub fn parse_prefix(binder: &[Variable], text: &str) -> Result<Vec<Value>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(vec![]);
    }
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.len() > binder.len() {
        return Err(CliError::Usage(format!("prefix has {} moves, the binder only {}", items.len(), binder.len())));
    }
    items
        .iter()
        .zip(binder)
        .map(|(item, var)| {
            let (name, value) = split_move(item)?;
            if let Some(name) = name.filter(|&n| n != var.name) {
                return Err(CliError::Usage(format!("prefix names `{name}` where `{}` is expected", var.name)));
            }
            Ok(value)
        })
        .collect()
}

fn split_move(item: &str) -> Result<(Option<&str>, Value), CliError> {
    let (name, value) = match item.split_once('=') {
        Some((n, v)) => (Some(n.trim()), v.trim()),
        None => (None, item),
    };
    let value = value.parse().map_err(|_| CliError::Usage(format!("`{item}`: `{value}` is not an integer")))?;
    Ok((name, value))
}

fn scenario_line(binder: &[Variable], scenario: &[Value]) -> String {
    binder.iter().zip(scenario).map(|(v, x)| format!("{}={x}", v.name)).collect::<Vec<_>>().join(" ")
}

fn scenario_json(binder: &[Variable], scenario: &[Value]) -> JsonValue {
    let map: Map<String, JsonValue> = binder.iter().zip(scenario).map(|(v, &x)| (v.name.clone(), x.into())).collect();
    JsonValue::Object(map)
}

fn strategy_json(binder: &[Variable], s: &StrategyTree) -> JsonValue {
    json!(s.scenarios().iter().map(|sc| scenario_json(binder, sc)).collect::<Vec<_>>())
}

/// A number when it fits JSON integers comfortably, a string otherwise.
fn count_json(n: u128) -> JsonValue {
    u64::try_from(n).map_or_else(|_| n.to_string().into(), JsonValue::from)
}

fn base_kind(b: &QcspBase) -> &'static str {
    match b {
        QcspBase::Top => "top",
        QcspBase::Bottom => "bottom",
        QcspBase::Pair(_) => "pair",
    }
}

/// Runs every command except `serve`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Verdict, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Compile { problem, output, options, stats } => {
            let p = load_problem(problem)?;
            let (base, st) = compile(&p, options.options())?;
            let text = base.to_json_pretty();
            if let Some(path) = output {
                std::fs::write(path, format!("{text}\n"))
                    .map_err(|source| CliError::Io { path: path.clone(), source })?;
            }
            let stats_json = json!({
                "recursive_calls": st.recursive_calls,
                "propagation_failures": st.propagation_failures,
                "nodes": st.nodes,
                "unshared_nodes": st.unshared_nodes,
            });
            if json {
                let mut doc = json!({ "kind": base_kind(&base), "winning": !base.is_bottom(), "stats": stats_json });
                if output.is_none() {
                    doc["base"] = serde_json::from_str(&text).expect("base JSON parses");
                }
                write_out(out, doc)?;
            } else {
                if output.is_none() {
                    write_out(out, &text)?;
                }
                if *stats || output.is_some() {
                    let line = format!(
                        "{}: {} nodes ({} without sharing), {} recursive calls, {} failed fixpoints",
                        base_kind(&base),
                        st.nodes,
                        st.unshared_nodes,
                        st.recursive_calls,
                        st.propagation_failures
                    );
                    // keep stdout a pure base document when no file is given
                    if output.is_some() {
                        write_out(out, line)?;
                    } else {
                        eprintln!("{line}");
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Solve { problem, options } => {
            let p = load_problem(problem)?;
            let (base, _) = compile(&p, options.options())?;
            let winning = !base.is_bottom();
            if json {
                write_out(out, json!({ "winning": winning }))?;
            } else {
                write_out(out, if winning { "WINNING" } else { "NO-WINNING-STRATEGY" })?;
            }
            Ok(Verdict::from_bool(winning))
        }
        Command::Count { problem, limit, budget, list } => {
            let p = load_problem(problem)?;
            if limit.is_none() && budget.is_none() && !list {
                let n = count_winning_strategies(&p)
                    .ok_or_else(|| CliError::Usage("strategy count overflows 128 bits".into()))?;
                if json {
                    write_out(out, json!({ "count": count_json(n), "complete": true }))?;
                } else {
                    write_out(out, n)?;
                }
                return Ok(Verdict::Yes);
            }
            let all = enumerate_winning_strategies(&p, EnumLimits { limit: *limit, budget: *budget })?;
            let complete = limit.is_none_or(|l| all.len() < l);
            if json {
                let mut doc = json!({ "count": all.len(), "complete": complete });
                if *list {
                    doc["strategies"] = all.iter().map(|s| strategy_json(p.variables(), s)).collect();
                }
                write_out(out, doc)?;
            } else {
                write_out(out, if complete { all.len().to_string() } else { format!("{}+", all.len()) })?;
                if *list {
                    for (i, s) in all.iter().enumerate() {
                        write_out(out, format!("strategy {i}"))?;
                        for sc in s.scenarios() {
                            write_out(out, format!("  {}", scenario_line(p.variables(), &sc)))?;
                        }
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Query { base, prefix, alt } => {
            let b = load_base(base)?;
            let pair = b.as_pair().ok_or(CliError::Query(QueryError::Base(BaseError::ConstantBase)))?;
            let binder = pair.binder();
            let prefix = parse_prefix(binder, prefix)?;
            match alt {
                None => {
                    let moves = allowed_moves(&b, &prefix)?;
                    let var = &binder[prefix.len()];
                    if json {
                        write_out(out, json!({ "variable": var.name, "values": moves }))?;
                    } else {
                        let list: Vec<String> = moves.iter().map(Value::to_string).collect();
                        write_out(out, format!("{}: {}", var.name, list.join(" ")))?;
                    }
                    Ok(Verdict::from_bool(!moves.is_empty()))
                }
                Some(alt) => {
                    let (name, value) = split_move(alt)?;
                    let next = binder.get(prefix.len()).map(|v| v.name.as_str());
                    let answer = if name.is_some() && name == next {
                        let var = &binder[prefix.len()];
                        if !var.allows(value) {
                            return Err(QueryError::ValueOutOfDomain { variable: var.name.clone(), value }.into());
                        }
                        allowed_moves(&b, &prefix)?.contains(&value)
                    } else {
                        let last = prefix.len().checked_sub(1).map(|i| binder[i].name.as_str());
                        if let Some(name) = name.filter(|&n| Some(n) != last) {
                            return Err(CliError::Usage(format!(
                                "--alt names `{name}`; it must name the last move of the prefix or the next variable"
                            )));
                        }
                        answer_next_move_choice(&b, &prefix, value)?
                    };
                    if json {
                        write_out(out, json!({ "answer": answer }))?;
                    } else {
                        write_out(out, if answer { "YES" } else { "NO" })?;
                    }
                    Ok(Verdict::from_bool(answer))
                }
            }
        }
        Command::Extract { base, tie_break, certificate } => {
            let b = load_base(base)?;
            if b.is_bottom() {
                if json {
                    write_out(out, json!({ "winning": false }))?;
                } else {
                    write_out(out, "NO-WINNING-STRATEGY")?;
                }
                return Ok(Verdict::No);
            }
            let s = extract_strategy(&b, *tie_break)?;
            let binder = b.as_pair().expect("not a constant").binder();
            if *certificate {
                write_out(out, certificate_of(binder, &s)?.to_json_pretty())?;
            } else if json {
                write_out(out, json!({ "winning": true, "scenarios": strategy_json(binder, &s) }))?;
            } else {
                for sc in s.scenarios() {
                    write_out(out, scenario_line(binder, &sc))?;
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Verify { certificate, problem } => {
            let c = load_base(certificate)?;
            let p = load_problem(problem)?;
            let valid = verify_certificate(&c, &p)?;
            if json {
                write_out(out, json!({ "valid": valid }))?;
            } else {
                write_out(out, if valid { "VALID" } else { "INVALID" })?;
            }
            Ok(Verdict::from_bool(valid))
        }
        Command::Check { base, problem } => {
            let b = load_base(base)?;
            let p = load_problem(problem)?;
            let compatible = check_compatibility(&b, &p)?;
            // constants carry no guards, so optimality holds vacuously
            let optimal = match b {
                QcspBase::Pair(_) => check_optimality(&b)?,
                _ => true,
            };
            if json {
                write_out(out, json!({ "compatible": compatible, "optimal": optimal }))?;
            } else {
                write_out(out, format!("compatible={compatible}\noptimal={optimal}"))?;
            }
            Ok(Verdict::from_bool(compatible && optimal))
        }
        Command::Serve { .. } => Err(CliError::Usage("serve runs through `main`".into())),
    }
}

/// Entry point of the `qcsp` binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if let Command::Serve { port, data_dir, cors_origin } = &cli.command {
        let runtime = match tokio::runtime::Runtime::new() {
            Ok(rt) => rt,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        };
        return match runtime.block_on(crate::api::serve(*port, data_dir, cors_origin.as_deref())) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        };
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(v) => v.exit_code(),
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            2
        }
    }
}
