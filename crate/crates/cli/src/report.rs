//! Machine-readable run reports. Every field is deterministic given the
//! command, scenario, flags, and seed: maps are ordered, rationals are
//! `"p/q"` strings, and no wall-clock data is included, so identical runs
//! serialize byte-identically.

use crate::scenario::{Scenario, ScenarioDoc};
use informative_markets::certify::{
    DistinguishabilityReport, SearchEffort, SeparabilityCertificate, Witness,
};
use informative_markets::dynamics::{Termination, Trace};
use informative_markets::model::{Distribution, Event, SignalStructure};
use informative_markets::rational::{format_rational, Rational};
use informative_markets::scoring::PaymentLedger;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How beliefs are paired in distinguishability checks: over all pairs of
/// join elements, including beliefs supported in different elements.
pub const PAIR_SCOPE: &str = "any-pair";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunReport {
    Check(CheckReport),
    Simulate(SimulateReport),
    WitnessSearch(WitnessSearchReport),
    Counterexample(CounterexampleReport),
    Design(DesignReport),
    ReduceSetcover(ReduceReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub scenario: String,
    pub events: Vec<String>,
    pub budget: u64,
    pub seed: u64,
    /// `informative` / `not-informative` / `undetermined`.
    pub verdict: String,
    pub pair_scope: String,
    pub distinguishability: Vec<EventVerdictDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<EffortDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub scenario: String,
    pub true_state: String,
    pub max_rounds: usize,
    pub trace: TraceDto,
    pub aggregated: bool,
    pub pooled_expectation: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
    pub ledger: LedgerDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearchReport {
    pub scenario: String,
    pub budget: u64,
    pub seed: u64,
    /// `non-separable` / `separable-certified` / `unknown`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<EffortDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub scenario: String,
    pub event: String,
    pub lower_bound: usize,
    pub independent_securities: usize,
    pub adversarial_traders: Vec<PartitionDto>,
    pub prior: BTreeMap<String, String>,
    pub consensus: Vec<String>,
    pub witness_verified: bool,
    pub blocks: BlocksDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksDto {
    pub in_event: BTreeMap<String, String>,
    pub in_event_alt: BTreeMap<String, String>,
    pub outside: BTreeMap<String, String>,
    pub outside_alt: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DesignReport {
    Complete {
        scenario: String,
        securities: Vec<SecurityColumnDto>,
    },
    Single {
        scenario: String,
        base: u64,
        payoffs: BTreeMap<String, String>,
        identifiers: Vec<SignalIdentifierDto>,
        sum_form_certified: bool,
    },
    Bound {
        scenario: String,
        event: String,
        bound: usize,
    },
    Minimal {
        scenario: String,
        events: Vec<String>,
        candidates: Vec<String>,
        budget: u64,
        seed: u64,
        /// `found` / `undetermined` / `infeasible`.
        result: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        selected: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<CertificateDto>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        smaller_undetermined: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        unresolved: Vec<Vec<String>>,
    },
    Greedy {
        scenario: String,
        events: Vec<String>,
        candidates: Vec<String>,
        selected: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub input: String,
    pub event: String,
    pub candidates: Vec<String>,
    /// The reduced problem as a ready-to-run scenario.
    pub scenario: ScenarioDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventVerdictDto {
    pub event: String,
    pub distinguished: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<BeliefPairDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeliefPairDto {
    pub p: BTreeMap<String, String>,
    pub p_prime: BTreeMap<String, String>,
    pub gap: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDto {
    pub distribution: BTreeMap<String, String>,
    pub consensus: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDto {
    CompleteMarket,
    FullyInformedTrader { trader: String },
    SignalSumForm { terms: Vec<SumFormSecurityDto> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFormSecurityDto {
    pub security: String,
    pub values: Vec<SumFormTermDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFormTermDto {
    pub trader: String,
    pub cell: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffortDto {
    pub trials: u64,
    pub simulations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalIdentifierDto {
    pub trader: String,
    pub cell: Vec<String>,
    pub index: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDto {
    pub trader: String,
    pub cells: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecurityColumnDto {
    pub name: String,
    pub payoffs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDto {
    pub true_state: String,
    pub initial_prediction: Vec<String>,
    pub initial_public: Vec<String>,
    pub announcements: Vec<AnnouncementDto>,
    /// `fixed-point` or `round-cap`.
    pub termination: String,
    pub rounds: usize,
    pub final_prediction: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnouncementDto {
    pub round: usize,
    pub trader: String,
    pub prediction: Vec<String>,
    pub public_after: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerDto {
    pub initial_score: String,
    pub final_score: String,
    pub payments: Vec<PaymentDto>,
    pub net_by_trader: Vec<TraderNetDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaymentDto {
    pub round: usize,
    pub trader: String,
    pub score: String,
    pub payment: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraderNetDto {
    pub trader: String,
    pub net: String,
}

pub fn rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

pub fn distribution_map(scenario: &Scenario, d: &Distribution) -> BTreeMap<String, String> {
    (0..d.n_states())
        .map(|s| {
            (
                scenario.states.label(s).to_string(),
                format_rational(d.mass(s)),
            )
        })
        .collect()
}

pub fn event_labels(scenario: &Scenario, event: &Event) -> Vec<String> {
    scenario.labels_of(event)
}

pub fn witness_dto(scenario: &Scenario, witness: &Witness) -> WitnessDto {
    WitnessDto {
        distribution: distribution_map(scenario, &witness.distribution),
        consensus: rationals(&witness.consensus),
    }
}

pub fn effort_dto(effort: &SearchEffort) -> EffortDto {
    EffortDto {
        trials: effort.trials,
        simulations: effort.simulations,
    }
}

pub fn certificate_dto(
    scenario: &Scenario,
    signals: &SignalStructure,
    security_names: &[String],
    certificate: &SeparabilityCertificate,
) -> CertificateDto {
    match certificate {
        SeparabilityCertificate::CompleteMarket => CertificateDto::CompleteMarket,
        SeparabilityCertificate::FullyInformedTrader { trader } => {
            CertificateDto::FullyInformedTrader {
                trader: scenario.trader_name(*trader).to_string(),
            }
        }
        SeparabilityCertificate::SignalSumForm { values } => {
            let terms = security_names
                .iter()
                .zip(values)
                .map(|(name, flat)| {
                    let mut cursor = 0usize;
                    let mut per_signal = Vec::new();
                    for (trader, partition) in signals.partitions().iter().enumerate() {
                        for cell in partition.cells() {
                            per_signal.push(SumFormTermDto {
                                trader: scenario.trader_name(trader).to_string(),
                                cell: cell
                                    .iter()
                                    .map(|&s| scenario.states.label(s).to_string())
                                    .collect(),
                                value: format_rational(&flat[cursor]),
                            });
                            cursor += 1;
                        }
                    }
                    SumFormSecurityDto {
                        security: name.clone(),
                        values: per_signal,
                    }
                })
                .collect();
            CertificateDto::SignalSumForm { terms }
        }
    }
}

pub fn event_verdicts(
    scenario: &Scenario,
    names: &[String],
    report: &DistinguishabilityReport,
) -> Vec<EventVerdictDto> {
    names
        .iter()
        .zip(&report.events)
        .map(|(name, verdict)| EventVerdictDto {
            event: name.clone(),
            distinguished: verdict.distinguished,
            counterexample: verdict.counterexample.as_ref().map(|cx| BeliefPairDto {
                p: distribution_map(scenario, &cx.p),
                p_prime: distribution_map(scenario, &cx.p_prime),
                gap: format_rational(&cx.gap),
            }),
        })
        .collect()
}

pub fn trace_dto(scenario: &Scenario, trace: &Trace) -> TraceDto {
    TraceDto {
        true_state: scenario.states.label(trace.true_state).to_string(),
        initial_prediction: rationals(&trace.initial_prediction),
        initial_public: event_labels(scenario, &trace.initial_public),
        announcements: trace
            .announcements
            .iter()
            .map(|a| AnnouncementDto {
                round: a.round,
                trader: scenario.trader_name(a.trader).to_string(),
                prediction: rationals(&a.prediction),
                public_after: event_labels(scenario, &a.public_after),
            })
            .collect(),
        termination: match trace.termination {
            Termination::FixedPoint => "fixed-point".to_string(),
            Termination::RoundCap => "round-cap".to_string(),
        },
        rounds: trace.rounds(),
        final_prediction: rationals(trace.final_prediction()),
    }
}

pub fn ledger_dto(scenario: &Scenario, ledger: &PaymentLedger) -> LedgerDto {
    LedgerDto {
        initial_score: format_rational(&ledger.initial_score),
        final_score: format_rational(&ledger.final_score),
        payments: ledger
            .entries
            .iter()
            .map(|entry| PaymentDto {
                round: entry.round,
                trader: scenario.trader_name(entry.trader).to_string(),
                score: format_rational(&entry.score),
                payment: format_rational(&entry.payment),
            })
            .collect(),
        net_by_trader: ledger
            .net_by_trader
            .iter()
            .enumerate()
            .map(|(trader, net)| TraderNetDto {
                trader: scenario.trader_name(trader).to_string(),
                net: format_rational(net),
            })
            .collect(),
    }
}

impl RunReport {
    /// Deterministic machine-readable form.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports always serialize");
        text.push('\n');
        text
    }
}
