use clap::{Parser, Subcommand, ValueEnum};
use informative_markets_cli::commands::{self, CliError, CommandResult, DesignArgs};
use std::path::PathBuf;
use std::time::Instant;

/// Design and verify informative security sets for prediction markets.
#[derive(Parser)]
#[command(name = "imkt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the scenario's securities are informative on events.
    Check {
        scenario: PathBuf,
        /// Event names (default: all declared events).
        #[arg(long, value_delimiter = ',')]
        events: Option<Vec<String>>,
        /// Witness-search budget in sampled priors.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Sampling seed (required with --json; defaults to 0 otherwise).
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Run the myopic trading dynamics from a given true state.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        true_state: String,
        /// Round cap (default: one more than the number of states).
        #[arg(long)]
        max_rounds: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a non-separability witness or a structural certificate.
    WitnessSearch {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Construct an adversarial signal structure under which the securities
    /// stall on an event, demonstrating the lower bound.
    Counterexample {
        scenario: PathBuf,
        /// The event of interest (exactly one).
        #[arg(long)]
        events: String,
        #[arg(long)]
        json: bool,
    },
    /// Construct security sets: complete, single, bound, minimal, greedy.
    Design {
        kind: DesignKindArg,
        scenario: PathBuf,
        /// Identifier base for the single-security construction.
        #[arg(long, default_value_t = 10)]
        base: u64,
        #[arg(long, value_delimiter = ',')]
        events: Option<Vec<String>>,
        /// Candidate security names (default: all declared securities).
        #[arg(long, value_delimiter = ',')]
        candidates: Option<Vec<String>>,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Translate a set-cover instance into an informative-event-set scenario.
    ReduceSetcover {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DesignKindArg {
    Complete,
    Single,
    Bound,
    Minimal,
    Greedy,
}

impl From<DesignKindArg> for commands::DesignKind {
    fn from(kind: DesignKindArg) -> Self {
        match kind {
            DesignKindArg::Complete => commands::DesignKind::Complete,
            DesignKindArg::Single => commands::DesignKind::Single,
            DesignKindArg::Bound => commands::DesignKind::Bound,
            DesignKindArg::Minimal => commands::DesignKind::Minimal,
            DesignKindArg::Greedy => commands::DesignKind::Greedy,
        }
    }
}

/// Machine mode never draws silent entropy: commands that consume a seed
/// must be given one explicitly when `--json` is set.
fn resolve_seed(json: bool, seed: Option<u64>) -> Result<u64, CliError> {
    match seed {
        Some(s) => Ok(s),
        None if json => Err(CliError::Usage(
            "--seed is required with --json for seed-consuming commands".into(),
        )),
        None => Ok(0),
    }
}

fn execute(command: &Command) -> Result<(CommandResult, bool), CliError> {
    match command {
        Command::Check {
            scenario,
            events,
            budget,
            seed,
            json,
        } => {
            let seed = resolve_seed(*json, *seed)?;
            Ok((
                commands::check(scenario, events.as_deref(), *budget, seed)?,
                *json,
            ))
        }
        Command::Simulate {
            scenario,
            true_state,
            max_rounds,
            json,
        } => Ok((
            commands::simulate_run(scenario, true_state, *max_rounds)?,
            *json,
        )),
        Command::WitnessSearch {
            scenario,
            budget,
            seed,
            json,
        } => {
            let seed = resolve_seed(*json, *seed)?;
            Ok((
                commands::witness_search_run(scenario, *budget, seed)?,
                *json,
            ))
        }
        Command::Counterexample {
            scenario,
            events,
            json,
        } => Ok((commands::counterexample_run(scenario, events)?, *json)),
        Command::Design {
            kind,
            scenario,
            base,
            events,
            candidates,
            budget,
            seed,
            json,
        } => {
            let needs_seed = matches!(kind, DesignKindArg::Minimal);
            let seed = if needs_seed {
                resolve_seed(*json, *seed)?
            } else {
                seed.unwrap_or(0)
            };
            let args = DesignArgs {
                base: *base,
                events: events.as_deref(),
                candidates: candidates.as_deref(),
                budget: *budget,
                seed,
            };
            Ok((commands::design_run(scenario, (*kind).into(), &args)?, *json))
        }
        Command::ReduceSetcover { input, json } => {
            Ok((commands::reduce_setcover_run(input)?, *json))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match execute(&cli.command) {
        Ok((result, json)) => {
            if json {
                print!("{}", result.report.to_json());
            } else {
                print!("{}", result.human);
                println!("elapsed: {:.1?}", started.elapsed());
            }
            std::process::exit(result.outcome.exit_code());
        }
        Err(error) => {
            eprintln!("error: {error}");
            std::process::exit(error.exit_code());
        }
    }
}
