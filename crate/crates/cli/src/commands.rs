//! Command dispatch: each command parses its inputs, runs the corresponding
//! core operation, and produces both a machine-readable report and a compact
//! human summary, plus the exit outcome.
//!
//! Exit codes: 0 for definitive positive verdicts and successful
//! constructions, 1 for definitive negative verdicts (artifacts attached),
//! 2 for undetermined outcomes, 3 for input errors, 4 for domain errors
//! such as infeasible designs or impossible true states.

use crate::report::*;
use crate::scenario::{parse_scenario, Scenario, ScenarioError};
use informative_markets::certify::{
    is_informative, search_witness, sum_form_values, verify_witness, InformativenessVerdict,
    SeparabilityVerdict, Witness,
};
use informative_markets::design::{
    always_informative_lower_bound, complete_market, counterexample_signal_structure,
    minimal_event_set_exact, minimal_event_set_greedy, reduce_set_cover,
    single_informative_security, DesignInstance, MinimalSetResult, NamedSubset, SetCoverInstance,
};
use informative_markets::dynamics::{
    aggregated, pooled_expectation, simulate, stall_witness, Termination,
};
use informative_markets::model::{Distribution, Event, SignalStructure};
use informative_markets::rational::format_rational;
use informative_markets::scoring::settle;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Domain(#[from] informative_markets::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) | CliError::Usage(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

/// Verdict-bearing exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
    Undetermined,
    Infeasible,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
            Outcome::Undetermined => 2,
            Outcome::Infeasible => 4,
        }
    }
}

#[derive(Debug)]
pub struct CommandResult {
    pub report: RunReport,
    pub outcome: Outcome,
    pub human: String,
}

fn fmt_set(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

fn fmt_vec(values: &[String]) -> String {
    format!("({})", values.join(", "))
}

fn fmt_map(map: &BTreeMap<String, String>) -> String {
    let inner: Vec<String> = map.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Resolves the requested event names (default: every declared event).
fn select_events(
    scenario: &Scenario,
    requested: Option<&[String]>,
) -> Result<(Vec<String>, Vec<Event>), CliError> {
    match requested {
        None => Ok((
            scenario.events.iter().map(|e| e.name.clone()).collect(),
            scenario.events.iter().map(|e| e.event.clone()).collect(),
        )),
        Some(names) => {
            let mut events = Vec::with_capacity(names.len());
            for name in names {
                let named = scenario
                    .event_named(name)
                    .ok_or_else(|| CliError::Usage(format!("no event named '{name}'")))?;
                events.push(named.event.clone());
            }
            Ok((names.to_vec(), events))
        }
    }
}

fn select_candidates(
    scenario: &Scenario,
    requested: Option<&[String]>,
) -> Result<Vec<usize>, CliError> {
    match requested {
        None => Ok((0..scenario.securities.n_securities()).collect()),
        Some(names) => names
            .iter()
            .map(|name| {
                scenario
                    .securities
                    .names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| CliError::Usage(format!("no security named '{name}'")))
            })
            .collect(),
    }
}

pub fn check(
    path: &Path,
    events: Option<&[String]>,
    budget: u64,
    seed: u64,
) -> Result<CommandResult, CliError> {
    let scenario = parse_scenario(path)?;
    let (event_names, event_sets) = select_events(&scenario, events)?;
    let verdict = is_informative(
        &scenario.securities,
        &event_sets,
        &scenario.signals,
        budget,
        seed,
    )?;
    let security_names = scenario.securities.names().to_vec();
    let mut report = CheckReport {
        scenario: path.display().to_string(),
        events: event_names.clone(),
        budget,
        seed,
        verdict: String::new(),
        pair_scope: PAIR_SCOPE.to_string(),
        distinguishability: Vec::new(),
        certificate: None,
        witness: None,
        search: None,
    };
    let mut human = format!(
        "check {} on events {}\n",
        path.display(),
        fmt_set(&event_names)
    );
    let outcome = match verdict {
        InformativenessVerdict::Informative {
            certificate,
            distinguishability,
        } => {
            report.verdict = "informative".into();
            report.distinguishability =
                event_verdicts(&scenario, &event_names, &distinguishability);
            report.certificate = Some(certificate_dto(
                &scenario,
                &scenario.signals,
                &security_names,
                &certificate,
            ));
            let _ = writeln!(human, "verdict: INFORMATIVE");
            let _ = writeln!(human, "separability: certified ({certificate:?})");
            Outcome::Positive
        }
        InformativenessVerdict::NotInformative {
            distinguishability,
            witness,
        } => {
            report.verdict = "not-informative".into();
            report.distinguishability =
                event_verdicts(&scenario, &event_names, &distinguishability);
            let _ = writeln!(human, "verdict: NOT INFORMATIVE");
            match &witness {
                Some(w) => {
                    let dto = witness_dto(&scenario, w);
                    let _ = writeln!(
                        human,
                        "witness: P = {}, consensus = {}",
                        fmt_map(&dto.distribution),
                        fmt_vec(&dto.consensus)
                    );
                    report.witness = Some(dto);
                }
                None => {
                    for verdict in event_verdicts(&scenario, &event_names, &distinguishability) {
                        if let Some(cx) = &verdict.counterexample {
                            let _ = writeln!(
                                human,
                                "event '{}' not distinguished: P = {} vs P' = {} (gap {})",
                                verdict.event,
                                fmt_map(&cx.p),
                                fmt_map(&cx.p_prime),
                                cx.gap
                            );
                        }
                    }
                }
            }
            Outcome::Negative
        }
        InformativenessVerdict::Undetermined {
            distinguishability,
            effort,
        } => {
            report.verdict = "undetermined".into();
            report.distinguishability =
                event_verdicts(&scenario, &event_names, &distinguishability);
            report.search = Some(effort_dto(&effort));
            let _ = writeln!(
                human,
                "verdict: UNDETERMINED (distinguished; no witness in {} trials / {} simulations, no certificate)",
                effort.trials, effort.simulations
            );
            Outcome::Undetermined
        }
    };
    Ok(CommandResult {
        report: RunReport::Check(report),
        outcome,
        human,
    })
}

pub fn simulate_run(
    path: &Path,
    true_state: &str,
    max_rounds: Option<usize>,
) -> Result<CommandResult, CliError> {
    let scenario = parse_scenario(path)?;
    let state = scenario
        .states
        .index_of(true_state)
        .ok_or_else(|| CliError::Usage(format!("no state labeled '{true_state}'")))?;
    let rounds = max_rounds.unwrap_or(scenario.states.len() + 1);
    let trace = simulate(
        &scenario.prior,
        &scenario.signals,
        &scenario.securities,
        state,
        rounds,
    )?;
    let did_aggregate = aggregated(&trace, &scenario.prior, &scenario.signals, &scenario.securities)?;
    let pooled = pooled_expectation(
        &scenario.prior,
        &scenario.signals,
        &scenario.securities,
        state,
    )?;
    let witness = match trace.termination {
        Termination::FixedPoint => stall_witness(
            &trace,
            &scenario.prior,
            &scenario.signals,
            &scenario.securities,
        )?,
        Termination::RoundCap => None,
    };
    let ledger = settle(&trace, state, &scenario.securities, &scenario.rule())?;

    let trace_out = trace_dto(&scenario, &trace);
    let ledger_out = ledger_dto(&scenario, &ledger);
    let mut human = format!("simulate {} from {}\n", path.display(), true_state);
    let _ = writeln!(
        human,
        "opening prediction: {}",
        fmt_vec(&trace_out.initial_prediction)
    );
    for a in &trace_out.announcements {
        let _ = writeln!(
            human,
            "round {:>2}  {:<16} -> {:<20} public {}",
            a.round,
            a.trader,
            fmt_vec(&a.prediction),
            fmt_set(&a.public_after)
        );
    }
    let _ = writeln!(
        human,
        "termination: {} after {} round(s)",
        trace_out.termination, trace_out.rounds
    );
    let _ = writeln!(
        human,
        "final: {}  pooled target: {}  aggregated: {}",
        fmt_vec(&trace_out.final_prediction),
        fmt_vec(&rationals(&pooled)),
        if did_aggregate { "yes" } else { "no" }
    );
    for net in &ledger_out.net_by_trader {
        let _ = writeln!(human, "net payment {:<16} {}", net.trader, net.net);
    }
    let witness_out = witness.as_ref().map(|w| {
        
        witness_dto(&scenario, w)
    });
    if let Some(w) = &witness_out {
        let _ = writeln!(
            human,
            "stall witness: P = {}, consensus = {}",
            fmt_map(&w.distribution),
            fmt_vec(&w.consensus)
        );
    }
    let outcome = match trace.termination {
        Termination::RoundCap => Outcome::Undetermined,
        Termination::FixedPoint if did_aggregate => Outcome::Positive,
        Termination::FixedPoint => Outcome::Negative,
    };
    Ok(CommandResult {
        report: RunReport::Simulate(SimulateReport {
            scenario: path.display().to_string(),
            true_state: true_state.to_string(),
            max_rounds: rounds,
            trace: trace_out,
            aggregated: did_aggregate,
            pooled_expectation: rationals(&pooled),
            witness: witness_out,
            ledger: ledger_out,
        }),
        outcome,
        human,
    })
}

pub fn witness_search_run(
    path: &Path,
    budget: u64,
    seed: u64,
) -> Result<CommandResult, CliError> {
    let scenario = parse_scenario(path)?;
    let verdict = search_witness(&scenario.securities, &scenario.signals, budget, seed)?;
    let security_names = scenario.securities.names().to_vec();
    let mut report = WitnessSearchReport {
        scenario: path.display().to_string(),
        budget,
        seed,
        verdict: String::new(),
        witness: None,
        certificate: None,
        search: None,
    };
    let mut human = format!("witness-search {}\n", path.display());
    let outcome = match verdict {
        SeparabilityVerdict::NonSeparable(witness) => {
            report.verdict = "non-separable".into();
            let dto = witness_dto(&scenario, &witness);
            let _ = writeln!(
                human,
                "NON-SEPARABLE: witness P = {}, consensus = {}",
                fmt_map(&dto.distribution),
                fmt_vec(&dto.consensus)
            );
            report.witness = Some(dto);
            Outcome::Negative
        }
        SeparabilityVerdict::SeparableCertified(certificate) => {
            report.verdict = "separable-certified".into();
            let _ = writeln!(human, "SEPARABLE: certified ({certificate:?})");
            report.certificate = Some(certificate_dto(
                &scenario,
                &scenario.signals,
                &security_names,
                &certificate,
            ));
            Outcome::Positive
        }
        SeparabilityVerdict::Unknown(effort) => {
            report.verdict = "unknown".into();
            report.search = Some(effort_dto(&effort));
            let _ = writeln!(
                human,
                "UNKNOWN: no witness in {} trials ({} simulations), no certificate",
                effort.trials, effort.simulations
            );
            Outcome::Undetermined
        }
    };
    Ok(CommandResult {
        report: RunReport::WitnessSearch(report),
        outcome,
        human,
    })
}

pub fn counterexample_run(path: &Path, event_name: &str) -> Result<CommandResult, CliError> {
    let scenario = parse_scenario(path)?;
    let named = scenario
        .event_named(event_name)
        .ok_or_else(|| CliError::Usage(format!("no event named '{event_name}'")))?;
    let cx = counterexample_signal_structure(&scenario.securities, &named.event)?;
    let witness = Witness {
        distribution: cx.prior.clone(),
        consensus: cx.consensus.clone(),
    };
    let verified = verify_witness(&witness, &scenario.securities, &cx.signals)?;
    let bound = always_informative_lower_bound(&named.event);
    let rank = scenario.securities.payoff_matrix().rank();

    let partition_dto = |index: usize| {
        let partition = cx.signals.partition(index);
        PartitionDto {
            trader: format!("adversary_{}", index + 1),
            cells: partition
                .cells()
                .iter()
                .map(|cell| {
                    cell.iter()
                        .map(|&s| scenario.states.label(s).to_string())
                        .collect()
                })
                .collect(),
        }
    };
    let report = CounterexampleReport {
        scenario: path.display().to_string(),
        event: event_name.to_string(),
        lower_bound: bound,
        independent_securities: rank,
        adversarial_traders: vec![partition_dto(0), partition_dto(1)],
        prior: distribution_map(&scenario, &cx.prior),
        consensus: rationals(&cx.consensus),
        witness_verified: verified,
        blocks: BlocksDto {
            in_event: distribution_map(&scenario, &cx.q_event),
            in_event_alt: distribution_map(&scenario, &cx.q_event_alt),
            outside: distribution_map(&scenario, &cx.q_outside),
            outside_alt: distribution_map(&scenario, &cx.q_outside_alt),
        },
    };
    let mut human = format!(
        "counterexample for event '{}' in {}\n",
        event_name,
        path.display()
    );
    let _ = writeln!(
        human,
        "independent securities: {rank} < required {bound} (always-informative lower bound)"
    );
    for t in &report.adversarial_traders {
        let cells: Vec<String> = t.cells.iter().map(|c| fmt_set(c)).collect();
        let _ = writeln!(human, "{}: {}", t.trader, cells.join(" | "));
    }
    let _ = writeln!(human, "stalling prior: {}", fmt_map(&report.prior));
    let _ = writeln!(
        human,
        "false consensus: {} (witness verified: {})",
        fmt_vec(&report.consensus),
        verified
    );
    Ok(CommandResult {
        report: RunReport::Counterexample(report),
        outcome: Outcome::Positive,
        human,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    Complete,
    Single,
    Bound,
    Minimal,
    Greedy,
}

pub struct DesignArgs<'a> {
    pub base: u64,
    pub events: Option<&'a [String]>,
    pub candidates: Option<&'a [String]>,
    pub budget: u64,
    pub seed: u64,
}

pub fn design_run(
    path: &Path,
    kind: DesignKind,
    args: &DesignArgs,
) -> Result<CommandResult, CliError> {
    let scenario = parse_scenario(path)?;
    match kind {
        DesignKind::Complete => design_complete(path, &scenario),
        DesignKind::Single => design_single(path, &scenario, args.base),
        DesignKind::Bound => design_bound(path, &scenario, args.events),
        DesignKind::Minimal => design_minimal(path, &scenario, args),
        DesignKind::Greedy => design_greedy(path, &scenario, args),
    }
}

fn design_complete(path: &Path, scenario: &Scenario) -> Result<CommandResult, CliError> {
    let market = complete_market(&scenario.states);
    let securities: Vec<SecurityColumnDto> = (0..market.n_securities())
        .map(|j| SecurityColumnDto {
            name: market.name(j).to_string(),
            payoffs: (0..scenario.states.len())
                .map(|s| {
                    (
                        scenario.states.label(s).to_string(),
                        format_rational(market.payoff(s, j)),
                    )
                })
                .collect(),
        })
        .collect();
    let human = format!(
        "complete market for {}: {} Arrow-Debreu securities ({})\n",
        path.display(),
        market.n_securities(),
        market.names().join(", ")
    );
    Ok(CommandResult {
        report: RunReport::Design(DesignReport::Complete {
            scenario: path.display().to_string(),
            securities,
        }),
        outcome: Outcome::Positive,
        human,
    })
}

fn design_single(path: &Path, scenario: &Scenario, base: u64) -> Result<CommandResult, CliError> {
    let (security, map) = single_informative_security(&scenario.signals, base)?;
    let payoffs: BTreeMap<String, String> = (0..scenario.states.len())
        .map(|s| {
            (
                scenario.states.label(s).to_string(),
                format_rational(security.payoff(s, 0)),
            )
        })
        .collect();
    let mut identifiers = Vec::new();
    let mut index = 0usize;
    for (trader, partition) in scenario.signals.partitions().iter().enumerate() {
        for (cell_index, cell) in partition.cells().iter().enumerate() {
            identifiers.push(SignalIdentifierDto {
                trader: scenario.trader_name(trader).to_string(),
                cell: cell
                    .iter()
                    .map(|&s| scenario.states.label(s).to_string())
                    .collect(),
                index,
                value: map.value(trader, cell_index).to_string(),
            });
            index += 1;
        }
    }
    let certified = sum_form_values(&security, &scenario.signals).is_some();
    let mut human = format!(
        "single informative security for {} (base {base})\n",
        path.display()
    );
    for (state, value) in &payoffs {
        let _ = writeln!(human, "  pays {value} in state {state}");
    }
    let _ = writeln!(human, "signal-sum decomposition certified: {certified}");
    Ok(CommandResult {
        report: RunReport::Design(DesignReport::Single {
            scenario: path.display().to_string(),
            base,
            payoffs,
            identifiers,
            sum_form_certified: certified,
        }),
        outcome: Outcome::Positive,
        human,
    })
}

fn design_bound(
    path: &Path,
    scenario: &Scenario,
    events: Option<&[String]>,
) -> Result<CommandResult, CliError> {
    let (names, sets) = select_events(scenario, events)?;
    let (name, event) = match (&names[..], &sets[..]) {
        ([name], [event]) => (name.clone(), event.clone()),
        _ => {
            return Err(CliError::Usage(
                "design bound needs exactly one event (use --events <name>)".into(),
            ))
        }
    };
    let bound = always_informative_lower_bound(&event);
    let human = format!(
        "always-informative lower bound for event '{name}': {bound} linearly independent securities\n"
    );
    Ok(CommandResult {
        report: RunReport::Design(DesignReport::Bound {
            scenario: path.display().to_string(),
            event: name,
            bound,
        }),
        outcome: Outcome::Positive,
        human,
    })
}

fn build_instance(
    scenario: &Scenario,
    events: Option<&[String]>,
    candidates: Option<&[String]>,
) -> Result<(DesignInstance, Vec<String>, Vec<String>), CliError> {
    let (event_names, event_sets) = select_events(scenario, events)?;
    let candidate_indices = select_candidates(scenario, candidates)?;
    let selection = scenario.securities.select(&candidate_indices)?;
    let candidate_names = selection.names().to_vec();
    let instance = DesignInstance::new(selection, scenario.signals.clone(), event_sets)?;
    Ok((instance, event_names, candidate_names))
}

fn design_minimal(
    path: &Path,
    scenario: &Scenario,
    args: &DesignArgs,
) -> Result<CommandResult, CliError> {
    let (instance, event_names, candidate_names) =
        build_instance(scenario, args.events, args.candidates)?;
    let result = minimal_event_set_exact(&instance, args.budget, args.seed)?;
    let name_subset =
        |subset: &[usize]| subset.iter().map(|&j| candidate_names[j].clone()).collect::<Vec<_>>();
    let mut human = format!(
        "minimal informative event set for {} on events {}\n",
        path.display(),
        fmt_set(&event_names)
    );
    let (result_str, selected, certificate, smaller, unresolved, outcome) = match result {
        MinimalSetResult::Found(solution) => {
            let names = name_subset(&solution.selected);
            let _ = writeln!(
                human,
                "minimum size {}: {}",
                names.len(),
                fmt_set(&names)
            );
            let certificate = solution.certificate.as_ref().map(|c| {
                certificate_dto(
                    scenario,
                    &instance.signals,
                    &name_subset(&solution.selected),
                    c,
                )
            });
            let smaller: Vec<Vec<String>> = solution
                .smaller_undetermined
                .iter()
                .map(|s| name_subset(s))
                .collect();
            if !smaller.is_empty() {
                let _ = writeln!(
                    human,
                    "flag: {} smaller subset(s) stayed undetermined; the optimum may be smaller",
                    smaller.len()
                );
            }
            (
                "found".to_string(),
                Some(names),
                certificate,
                smaller,
                Vec::new(),
                Outcome::Positive,
            )
        }
        MinimalSetResult::Undetermined { unresolved } => {
            let named: Vec<Vec<String>> = unresolved.iter().map(|s| name_subset(s)).collect();
            let _ = writeln!(
                human,
                "UNDETERMINED: {} candidate subset(s) of size {} are distinguished and unrefuted but lack a certificate",
                named.len(),
                named.first().map_or(0, Vec::len)
            );
            (
                "undetermined".to_string(),
                None,
                None,
                Vec::new(),
                named,
                Outcome::Undetermined,
            )
        }
        MinimalSetResult::Infeasible => {
            let _ = writeln!(human, "INFEASIBLE: no candidate subset is informative");
            (
                "infeasible".to_string(),
                None,
                None,
                Vec::new(),
                Vec::new(),
                Outcome::Infeasible,
            )
        }
    };
    Ok(CommandResult {
        report: RunReport::Design(DesignReport::Minimal {
            scenario: path.display().to_string(),
            events: event_names,
            candidates: candidate_names,
            budget: args.budget,
            seed: args.seed,
            result: result_str,
            selected,
            certificate,
            smaller_undetermined: smaller,
            unresolved,
        }),
        outcome,
        human,
    })
}

fn design_greedy(
    path: &Path,
    scenario: &Scenario,
    args: &DesignArgs,
) -> Result<CommandResult, CliError> {
    let (instance, event_names, candidate_names) =
        build_instance(scenario, args.events, args.candidates)?;
    match minimal_event_set_greedy(&instance) {
        Ok(picks) => {
            let names: Vec<String> = picks.iter().map(|&j| candidate_names[j].clone()).collect();
            let human = format!(
                "greedy selection for {} on events {}: size {} {}\n",
                path.display(),
                fmt_set(&event_names),
                names.len(),
                fmt_set(&names)
            );
            Ok(CommandResult {
                report: RunReport::Design(DesignReport::Greedy {
                    scenario: path.display().to_string(),
                    events: event_names,
                    candidates: candidate_names,
                    selected: names,
                }),
                outcome: Outcome::Positive,
                human,
            })
        }
        Err(informative_markets::Error::Infeasible) => {
            let human = format!(
                "greedy selection for {}: INFEASIBLE (some pair is never separated)\n",
                path.display()
            );
            Ok(CommandResult {
                report: RunReport::Design(DesignReport::Greedy {
                    scenario: path.display().to_string(),
                    events: event_names,
                    candidates: candidate_names,
                    selected: Vec::new(),
                }),
                outcome: Outcome::Infeasible,
                human,
            })
        }
        Err(other) => Err(other.into()),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetCoverDoc {
    universe: Vec<String>,
    sets: Vec<SetDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetDoc {
    name: String,
    members: Vec<String>,
}

pub fn reduce_setcover_run(path: &Path) -> Result<CommandResult, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| {
        CliError::Scenario(ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })
    })?;
    let doc: SetCoverDoc = serde_json::from_str(&text).map_err(|source| {
        CliError::Scenario(ScenarioError::Json {
            path: path.display().to_string(),
            source,
        })
    })?;
    let instance = SetCoverInstance {
        universe: doc.universe.clone(),
        sets: doc
            .sets
            .iter()
            .map(|s| NamedSubset {
                name: s.name.clone(),
                members: s.members.clone(),
            })
            .collect(),
    };
    let reduced = reduce_set_cover(&instance)?;

    // Package the reduction as a runnable scenario with a uniform prior.
    let n = reduced.states.len();
    let scenario = Scenario {
        states: reduced.states.clone(),
        prior: Distribution::uniform(n),
        trader_names: vec!["observer".to_string()],
        signals: reduced.instance.signals.clone(),
        securities: reduced.instance.candidates.clone(),
        events: vec![crate::scenario::NamedEvent {
            name: "covered".to_string(),
            event: reduced.event.clone(),
        }],
        b: informative_markets::rational::rat_int(1),
    };
    let candidates = reduced.instance.candidates.names().to_vec();
    let mut human = format!(
        "reduced set cover {} to an informative-event-set instance\n",
        path.display()
    );
    let _ = writeln!(
        human,
        "states: {} (universe plus '{}')",
        n,
        reduced.states.label(n - 1)
    );
    let _ = writeln!(
        human,
        "one fully informed trader; candidates: {}; event 'covered' = the universe",
        candidates.join(", ")
    );
    let _ = writeln!(
        human,
        "a candidate subset is informative exactly when the matching sets cover the universe"
    );
    Ok(CommandResult {
        report: RunReport::ReduceSetcover(ReduceReport {
            input: path.display().to_string(),
            event: "covered".to_string(),
            candidates,
            scenario: scenario.to_doc(),
        }),
        outcome: Outcome::Positive,
        human,
    })
}

/// Re-verifies the artifacts embedded in a loaded report against a scenario:
/// witnesses must still pass `verify_witness` and distinguishability
/// counterexamples must still exhibit equal expectations with different
/// event probabilities.
pub fn reverify_report(report: &RunReport, scenario: &Scenario) -> Result<bool, CliError> {
    let parse_map = |map: &BTreeMap<String, String>| -> Result<Distribution, CliError> {
        let mut mass = vec![informative_markets::rational::rat_int(0); scenario.states.len()];
        for (label, text) in map {
            let state = scenario
                .states
                .index_of(label)
                .ok_or_else(|| CliError::Usage(format!("unknown state '{label}' in report")))?;
            mass[state] = informative_markets::rational::parse_rational(text)
                .map_err(CliError::Usage)?;
        }
        Distribution::new(mass).map_err(CliError::Domain)
    };
    let parse_witness = |dto: &WitnessDto| -> Result<Witness, CliError> {
        Ok(Witness {
            distribution: parse_map(&dto.distribution)?,
            consensus: dto
                .consensus
                .iter()
                .map(|t| informative_markets::rational::parse_rational(t))
                .collect::<Result<_, _>>()
                .map_err(CliError::Usage)?,
        })
    };
    let verify_in = |witness: &WitnessDto,
                     signals: &SignalStructure|
     -> Result<bool, CliError> {
        let w = parse_witness(witness)?;
        verify_witness(&w, &scenario.securities, signals).map_err(CliError::Domain)
    };
    match report {
        RunReport::Check(r) => {
            let mut ok = true;
            if let Some(w) = &r.witness {
                ok &= verify_in(w, &scenario.signals)?;
            }
            for verdict in &r.distinguishability {
                if let Some(cx) = &verdict.counterexample {
                    let named = scenario
                        .event_named(&verdict.event)
                        .ok_or_else(|| CliError::Usage(format!("no event '{}'", verdict.event)))?;
                    let p = parse_map(&cx.p)?;
                    let q = parse_map(&cx.p_prime)?;
                    let ep = informative_markets::model::expectation(&p, &scenario.securities)
                        .map_err(CliError::Domain)?;
                    let eq = informative_markets::model::expectation(&q, &scenario.securities)
                        .map_err(CliError::Domain)?;
                    ok &= ep == eq
                        && p.probability(&named.event).map_err(CliError::Domain)?
                            != q.probability(&named.event).map_err(CliError::Domain)?;
                }
            }
            Ok(ok)
        }
        RunReport::Simulate(r) => match &r.witness {
            Some(w) => verify_in(w, &scenario.signals),
            None => Ok(true),
        },
        RunReport::WitnessSearch(r) => match &r.witness {
            Some(w) => verify_in(w, &scenario.signals),
            None => Ok(true),
        },
        _ => Ok(true),
    }
}
