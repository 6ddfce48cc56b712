//! `nlgames`: verify and simulate pseudo-telepathy strategies.
//!
//! Exit status: 0 when everything checked out, 1 when a verification
//! failure was found, 2 for bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nlgames::kscolour::{
    cabello18, colour_prefix_maximal, contextual_repair_search_with, count_valid_colourings_with, load_ks_set,
    parity_obstruction, Enumeration, KsSet, RepairOutcome,
};
use nlgames::ksgame::{builtin_quad_4d, check_sufficient_condition, synthesize_quad, KsGame, StrategyQuad};
use nlgames::magic::{classical_impossibility, magic_verify_nlbox_with, MagicGame, MagicNlBox};
use nlgames::nlbox::{CorrelationBox, TSIRELSON_BOUND};
use nlgames::quantum::{quantum_verify_with, QuantumResource, QuantumStrategy};
use nlgames::{simulate_with, verify_exhaustive_with, Exec, ReportDocument, SimStats, VerificationReport, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "nlgames", version, about = "Verification lab for pseudo-telepathy games")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kochen-Specker sets and the impossible-colouring game.
    #[command(subcommand)]
    Ks(KsCommand),
    /// The odd-size magic-square game.
    Magic(MagicArgs),
    /// Play seeded rounds and report the win rate.
    Simulate(SimulateArgs),
    /// PR-box diagnostics.
    Box(BoxArgs),
}

#[derive(Subcommand)]
enum KsCommand {
    /// Verify a single-box strategy exhaustively.
    Verify {
        #[command(flatten)]
        source: SetSource,
        /// New basis order as old indices, e.g. 8,0,1,2,3,4,5,6,7.
        #[arg(long, value_delimiter = ',')]
        permutation: Option<Vec<usize>>,
    },
    /// Count colourings and report the prefix and repair searches.
    Colour {
        #[command(flatten)]
        source: SetSource,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct SetSource {
    /// Use the built-in 18-vector set (the default).
    #[arg(long)]
    builtin: bool,
    /// Load a KS set from a JSON file.
    #[arg(long, value_name = "FILE")]
    set: Option<PathBuf>,
}

impl SetSource {
    fn load(&self) -> Result<(KsSet, String)> {
        match &self.set {
            None => Ok((cabello18(), "builtin".into())),
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                let set = load_ks_set(&text).with_context(|| format!("{}", path.display()))?;
                Ok((set, path.display().to_string()))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Backtrack,
}

#[derive(Args)]
struct MagicArgs {
    /// Square size; odd and at least 3.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = MagicStrategy::Nlbox)]
    strategy: MagicStrategy,
    #[arg(value_enum)]
    action: MagicAction,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MagicStrategy {
    Nlbox,
    Quantum,
    ClassicalSearch,
}

#[derive(Clone, Copy, ValueEnum)]
enum MagicAction {
    Verify,
    Impossible,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    game: SimGame,
    /// Square size for the magic game.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    source: SetSource,
    #[arg(long, value_enum, default_value_t = SimStrategy::Nlbox)]
    strategy: SimStrategy,
    #[arg(long)]
    rounds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimGame {
    Ks,
    Magic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimStrategy {
    Nlbox,
    Quantum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct BoxArgs {
    #[arg(long, value_enum)]
    check: BoxCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoxCheck {
    Chsh,
    Nosignalling,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match run(exec, cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(exec: Exec, command: Command) -> Result<ExitCode> {
    match command {
        Command::Ks(KsCommand::Verify { source, permutation }) => ks_verify(exec, &source, permutation.as_deref()),
        Command::Ks(KsCommand::Colour { source, mode }) => ks_colour(exec, &source, mode),
        Command::Magic(args) => magic(exec, &args),
        Command::Simulate(args) => simulate(exec, &args),
        Command::Box(args) => nl_box(args.check),
    }
}

fn emit_report(report: VerificationReport) -> ExitCode {
    let won = report.all_won();
    println!("{}", ReportDocument::from(report).to_json());
    if won {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn vector_list(set: &KsSet, ids: &[usize]) -> Value {
    json!(ids.iter().map(|&v| set.vector(v).components()).collect::<Vec<_>>())
}

fn ks_verify(exec: Exec, source: &SetSource, permutation: Option<&[usize]>) -> Result<ExitCode> {
    let (mut set, origin) = source.load()?;
    if let Some(order) = permutation {
        set = set.permuted(order)?;
    }
    let (quad, kind): (StrategyQuad, &str) = if source.set.is_none() && permutation.is_none() {
        (builtin_quad_4d(), "builtin")
    } else {
        match synthesize_quad(&set) {
            Ok(q) => (q, "synthesized"),
            Err(e) => bail!("no strategy for this set: {e}"),
        }
    };
    let game = KsGame::new(&set);
    let report = verify_exhaustive_with(exec, &game, &quad, &quad.resource())?
        .with_parameter("set", origin)
        .with_parameter("strategy", kind)
        .with_parameter("residual_bases", json!(quad.residual_bases()))
        .with_parameter("flip_set", vector_list(&set, &quad.flip_set()));
    let report = match permutation {
        Some(order) => report.with_parameter("permutation", json!(order)),
        None => report,
    };
    Ok(emit_report(report))
}

fn ks_colour(exec: Exec, source: &SetSource, mode: Mode) -> Result<ExitCode> {
    let (set, origin) = source.load()?;
    let enumeration = match mode {
        Mode::Exhaustive => Enumeration::Exhaustive,
        Mode::Backtrack => Enumeration::Backtrack,
    };
    let count = count_valid_colourings_with(exec, &set, enumeration)?;
    let prefix = colour_prefix_maximal(&set);
    let repair = match contextual_repair_search_with(exec, &set) {
        RepairOutcome::AlreadyColourable => Value::Null,
        RepairOutcome::Candidates(ids) => vector_list(&set, &ids),
    };
    print_json(&json!({
        "set": origin,
        "dimension": set.dimension(),
        "vectors": set.vector_count(),
        "bases": set.basis_count(),
        "mode": enumeration,
        "valid_colourings": count,
        "parity_obstruction": parity_obstruction(&set),
        "prefix_len": prefix.prefix_len,
        "residual": prefix.residual,
        "repair": repair,
        "sufficient_condition": check_sufficient_condition(&set),
        "tool_version": TOOL_VERSION,
    }));
    Ok(ExitCode::SUCCESS)
}

fn magic(exec: Exec, args: &MagicArgs) -> Result<ExitCode> {
    MagicGame::new(args.n)?;
    match (args.action, args.strategy) {
        (MagicAction::Verify, MagicStrategy::Nlbox) => Ok(emit_report(magic_verify_nlbox_with(exec, args.n)?)),
        (MagicAction::Verify, MagicStrategy::Quantum) => {
            let resource = QuantumResource::standard(args.n)?;
            Ok(emit_report(quantum_verify_with(exec, &resource)?))
        }
        // No classical strategy can win, so a classical "verify" always
        // reports the impossibility and fails.
        (MagicAction::Verify, MagicStrategy::ClassicalSearch) => {
            print_impossibility(args.n)?;
            Ok(ExitCode::from(1))
        }
        (MagicAction::Impossible, _) => {
            let impossible = print_impossibility(args.n)?;
            Ok(if impossible { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn print_impossibility(n: usize) -> Result<bool> {
    let verdict = classical_impossibility(n)?;
    print_json(&json!({
        "game": "magic-square",
        "n": n,
        "classically_impossible": verdict.impossible(),
        "verdict": verdict,
        "tool_version": TOOL_VERSION,
    }));
    Ok(verdict.impossible())
}

fn simulate(exec: Exec, args: &SimulateArgs) -> Result<ExitCode> {
    let (game_name, parameters, stats): (&str, Value, SimStats) = match args.game {
        SimGame::Magic => {
            let Some(n) = args.n else {
                bail!("--game magic needs --n");
            };
            let game = MagicGame::new(n)?;
            let stats = match args.strategy {
                SimStrategy::Nlbox => {
                    let wiring = MagicNlBox::new(n)?;
                    simulate_with(exec, &game, &wiring, &wiring.resource(), args.rounds, args.seed)?
                }
                SimStrategy::Quantum => {
                    let resource = QuantumResource::standard(n)?;
                    let strategy = QuantumStrategy::new(n)?;
                    simulate_with(exec, &game, &strategy, &resource, args.rounds, args.seed)?
                }
            };
            ("magic-square", json!({ "n": n }), stats)
        }
        SimGame::Ks => {
            if args.strategy != SimStrategy::Nlbox {
                bail!("the impossible-colouring game only has a box strategy");
            }
            let (set, origin) = args.source.load()?;
            let quad = if args.source.set.is_none() {
                builtin_quad_4d()
            } else {
                synthesize_quad(&set).context("no strategy for this set")?
            };
            let game = KsGame::new(&set);
            let stats = simulate_with(exec, &game, &quad, &quad.resource(), args.rounds, args.seed)?;
            ("impossible-colouring", json!({ "set": origin }), stats)
        }
    };
    let strategy = match args.strategy {
        SimStrategy::Nlbox => "nlbox",
        SimStrategy::Quantum => "quantum",
    };
    match args.format {
        Format::Json => print_json(&json!({
            "game": game_name,
            "parameters": parameters,
            "strategy": strategy,
            "seed": args.seed,
            "rounds": stats.rounds,
            "wins": stats.wins,
            "win_rate": stats.win_rate,
            "tool_version": TOOL_VERSION,
        })),
        Format::Text => println!(
            "{game_name} {strategy} seed {}: {} of {} rounds won (win rate {})",
            args.seed, stats.wins, stats.rounds, stats.win_rate
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn nl_box(check: BoxCheck) -> Result<ExitCode> {
    let pr = CorrelationBox::pr();
    match check {
        BoxCheck::Chsh => {
            let pr_value = pr.chsh_value()?;
            let local_max = CorrelationBox::all_local_deterministic()
                .iter()
                .map(CorrelationBox::chsh_value)
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .max()
                .expect("sixteen local boxes");
            print_json(&json!({
                "pr_box": pr_value.to_string(),
                "local_deterministic_max": local_max.to_string(),
                "tsirelson_bound": TSIRELSON_BOUND,
            }));
        }
        BoxCheck::Nosignalling => {
            let verdict = pr.check_no_signalling()?;
            print_json(&json!({
                "pr_box": if verdict.passed() { "pass" } else { "fail" },
            }));
            if !verdict.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
