//! Scenario files: a single JSON document declaring states, prior, traders,
//! securities, events, and scoring parameters. Rationals are serialized as
//! `"p/q"` strings so parsing is exact.

use informative_markets::model::{
    Distribution, Event, Partition, SecuritySet, SignalStructure, StateSpace,
};
use informative_markets::rational::{format_rational, parse_rational, Rational};
use informative_markets::scoring::BrierRule;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// On-disk scenario document. Maps are ordered so serialization is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub states: Vec<String>,
    /// State label to rational mass; every state must be listed (zero-mass
    /// states explicitly so).
    pub prior: BTreeMap<String, String>,
    pub traders: Vec<TraderDoc>,
    pub securities: Vec<SecurityDoc>,
    #[serde(default)]
    pub events: Vec<EventDoc>,
    #[serde(default)]
    pub scoring: Option<ScoringDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraderDoc {
    pub name: String,
    pub partition: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecurityDoc {
    pub name: String,
    /// State label to rational payoff; omitted states pay zero.
    pub payoffs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDoc {
    pub name: String,
    pub states: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoringDoc {
    pub b: String,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read '{path}': {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("'{path}' is not valid scenario JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },

    #[error("{location}: unknown state label '{label}'")]
    UnknownState { location: String, label: String },

    #[error("{location}: malformed rational '{text}': {detail}")]
    MalformedRational {
        location: String,
        text: String,
        detail: String,
    },

    #[error("{location}: negative mass")]
    NegativeMass { location: String },

    #[error("prior masses sum to {sum}, not 1")]
    PriorNotNormalized { sum: String },

    #[error("prior is missing an entry for state '{label}'")]
    PriorIncomplete { label: String },

    #[error("trader '{trader}': cells do not form a partition: {detail}")]
    BadPartition { trader: String, detail: String },

    #[error("duplicate trader name '{name}'")]
    DuplicateTrader { name: String },

    #[error("duplicate event name '{name}'")]
    DuplicateEvent { name: String },

    #[error("scoring constant b must be positive, got '{got}'")]
    NonPositiveScale { got: String },

    #[error("{location}: {detail}")]
    Invalid { location: String, detail: String },
}

/// A named event of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedEvent {
    pub name: String,
    pub event: Event,
}

/// A fully validated problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub states: StateSpace,
    pub prior: Distribution,
    pub trader_names: Vec<String>,
    pub signals: SignalStructure,
    pub securities: SecuritySet,
    pub events: Vec<NamedEvent>,
    pub b: Rational,
}

impl Scenario {
    pub fn rule(&self) -> BrierRule {
        BrierRule::new(self.b.clone()).expect("validated at parse time")
    }

    pub fn event_named(&self, name: &str) -> Option<&NamedEvent> {
        self.events.iter().find(|e| e.name == name)
    }

    pub fn trader_name(&self, index: usize) -> &str {
        &self.trader_names[index]
    }

    pub fn labels_of(&self, event: &Event) -> Vec<String> {
        event
            .members()
            .iter()
            .map(|&s| self.states.label(s).to_string())
            .collect()
    }

    pub fn from_doc(doc: &ScenarioDoc) -> Result<Self, ScenarioError> {
        let states = StateSpace::new(doc.states.clone()).map_err(|e| ScenarioError::Invalid {
            location: "states".into(),
            detail: e.to_string(),
        })?;
        let n = states.len();
        let resolve = |location: &str, label: &str| -> Result<usize, ScenarioError> {
            states
                .index_of(label)
                .ok_or_else(|| ScenarioError::UnknownState {
                    location: location.to_string(),
                    label: label.to_string(),
                })
        };

        // Prior: every state listed explicitly, masses summing to exactly 1.
        let mut mass = vec![Rational::zero(); n];
        let mut listed = vec![false; n];
        for (label, text) in &doc.prior {
            let location = format!("prior[{label}]");
            let state = resolve(&location, label)?;
            let value = parse_rational(text).map_err(|detail| ScenarioError::MalformedRational {
                location: location.clone(),
                text: text.clone(),
                detail,
            })?;
            if value < Rational::zero() {
                return Err(ScenarioError::NegativeMass { location });
            }
            mass[state] = value;
            listed[state] = true;
        }
        if let Some(missing) = listed.iter().position(|&seen| !seen) {
            return Err(ScenarioError::PriorIncomplete {
                label: states.label(missing).to_string(),
            });
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(ScenarioError::PriorNotNormalized {
                sum: format_rational(&total),
            });
        }
        let prior = Distribution::new(mass).map_err(|e| ScenarioError::Invalid {
            location: "prior".into(),
            detail: e.to_string(),
        })?;

        // Traders and their partitions.
        let mut trader_names = Vec::with_capacity(doc.traders.len());
        let mut partitions = Vec::with_capacity(doc.traders.len());
        for trader in &doc.traders {
            if trader_names.contains(&trader.name) {
                return Err(ScenarioError::DuplicateTrader {
                    name: trader.name.clone(),
                });
            }
            let mut cells = Vec::with_capacity(trader.partition.len());
            for cell in &trader.partition {
                let mut indices = Vec::with_capacity(cell.len());
                for label in cell {
                    indices.push(resolve(
                        &format!("traders[{}].partition", trader.name),
                        label,
                    )?);
                }
                cells.push(indices);
            }
            let partition =
                Partition::new(n, cells).map_err(|e| ScenarioError::BadPartition {
                    trader: trader.name.clone(),
                    detail: e.to_string(),
                })?;
            trader_names.push(trader.name.clone());
            partitions.push(partition);
        }
        let signals = SignalStructure::new(partitions).map_err(|e| ScenarioError::Invalid {
            location: "traders".into(),
            detail: e.to_string(),
        })?;

        // Securities: omitted states pay zero.
        let mut names = Vec::with_capacity(doc.securities.len());
        let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(doc.securities.len());
        for security in &doc.securities {
            let mut column = vec![Rational::zero(); n];
            for (label, text) in &security.payoffs {
                let location = format!("securities[{}].payoffs[{label}]", security.name);
                let state = resolve(&location, label)?;
                column[state] =
                    parse_rational(text).map_err(|detail| ScenarioError::MalformedRational {
                        location,
                        text: text.clone(),
                        detail,
                    })?;
            }
            names.push(security.name.clone());
            columns.push(column);
        }
        let payoffs: Vec<Vec<Rational>> = (0..n)
            .map(|state| columns.iter().map(|c| c[state].clone()).collect())
            .collect();
        let securities =
            SecuritySet::new(names, payoffs).map_err(|e| ScenarioError::Invalid {
                location: "securities".into(),
                detail: e.to_string(),
            })?;

        // Events of interest.
        let mut events: Vec<NamedEvent> = Vec::with_capacity(doc.events.len());
        for event in &doc.events {
            if events.iter().any(|e| e.name == event.name) {
                return Err(ScenarioError::DuplicateEvent {
                    name: event.name.clone(),
                });
            }
            let mut indices = Vec::with_capacity(event.states.len());
            for label in &event.states {
                indices.push(resolve(&format!("events[{}]", event.name), label)?);
            }
            let event_set = Event::new(n, indices).map_err(|e| ScenarioError::Invalid {
                location: format!("events[{}]", event.name),
                detail: e.to_string(),
            })?;
            events.push(NamedEvent {
                name: event.name.clone(),
                event: event_set,
            });
        }

        // Scoring: default b = 1.
        let b = match &doc.scoring {
            None => Rational::one(),
            Some(scoring) => {
                let value = parse_rational(&scoring.b).map_err(|detail| {
                    ScenarioError::MalformedRational {
                        location: "scoring.b".into(),
                        text: scoring.b.clone(),
                        detail,
                    }
                })?;
                if value <= Rational::zero() {
                    return Err(ScenarioError::NonPositiveScale {
                        got: scoring.b.clone(),
                    });
                }
                value
            }
        };

        Ok(Scenario {
            states,
            prior,
            trader_names,
            signals,
            securities,
            events,
            b,
        })
    }

    /// Re-emits the scenario as a document. Maps list every state
    /// explicitly and partitions come out in canonical order, so emission is
    /// deterministic and reparsing yields a structurally identical scenario.
    pub fn to_doc(&self) -> ScenarioDoc {
        let label = |s: &usize| self.states.label(*s).to_string();
        ScenarioDoc {
            states: self.states.labels().to_vec(),
            prior: self
                .states
                .labels()
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), format_rational(self.prior.mass(i))))
                .collect(),
            traders: self
                .trader_names
                .iter()
                .zip(self.signals.partitions())
                .map(|(name, partition)| TraderDoc {
                    name: name.clone(),
                    partition: partition
                        .cells()
                        .iter()
                        .map(|cell| cell.iter().map(&label).collect())
                        .collect(),
                })
                .collect(),
            securities: (0..self.securities.n_securities())
                .map(|j| SecurityDoc {
                    name: self.securities.name(j).to_string(),
                    payoffs: (0..self.states.len())
                        .map(|s| {
                            (
                                self.states.label(s).to_string(),
                                format_rational(self.securities.payoff(s, j)),
                            )
                        })
                        .collect(),
                })
                .collect(),
            events: self
                .events
                .iter()
                .map(|e| EventDoc {
                    name: e.name.clone(),
                    states: e.event.members().iter().map(label).collect(),
                })
                .collect(),
            scoring: Some(ScoringDoc {
                b: format_rational(&self.b),
            }),
        }
    }
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc: ScenarioDoc =
        serde_json::from_str(&text).map_err(|source| ScenarioError::Json {
            path: path.display().to_string(),
            source,
        })?;
    Scenario::from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc() -> ScenarioDoc {
        serde_json::from_str(
            r#"{
                "states": ["w1", "w2", "w3", "w4"],
                "prior": {"w1": "1/4", "w2": "1/4", "w3": "1/4", "w4": "1/4"},
                "traders": [
                    {"name": "analyst", "partition": [["w1", "w4"], ["w2", "w3"]]},
                    {"name": "caucus_goer", "partition": [["w1", "w3"], ["w2", "w4"]]}
                ],
                "securities": [
                    {"name": "election", "payoffs": {"w1": "1", "w2": "1"}}
                ],
                "events": [{"name": "election", "states": ["w1", "w2"]}],
                "scoring": {"b": "1"}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn parses_the_election_scenario() {
        let scenario = Scenario::from_doc(&minimal_doc()).unwrap();
        assert_eq!(scenario.states.len(), 4);
        assert_eq!(scenario.trader_names, vec!["analyst", "caucus_goer"]);
        assert_eq!(scenario.securities.n_securities(), 1);
        assert!(scenario.signals.join().is_singletons());
        assert_eq!(scenario.prior, Distribution::uniform(4));
        // Omitted payoffs default to zero.
        assert_eq!(
            scenario.securities.payoff(2, 0),
            &Rational::zero()
        );
    }

    #[test]
    fn rejects_non_normalized_prior() {
        let mut doc = minimal_doc();
        doc.prior.insert("w4".into(), "1/3".into());
        match Scenario::from_doc(&doc) {
            Err(ScenarioError::PriorNotNormalized { sum }) => assert_eq!(sum, "13/12"),
            other => panic!("expected prior diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn rejects_prior_that_skips_a_state() {
        // Three thirds over four states: the masses happen to sum to 1, but
        // the prior must still assign every state explicitly.
        let mut doc = minimal_doc();
        doc.prior = [("w1", "1/3"), ("w2", "1/3"), ("w3", "1/3")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        match Scenario::from_doc(&doc) {
            Err(ScenarioError::PriorIncomplete { label }) => assert_eq!(label, "w4"),
            other => panic!("expected incomplete-prior diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_state_with_location() {
        let mut doc = minimal_doc();
        doc.events[0].states.push("w9".into());
        match Scenario::from_doc(&doc) {
            Err(ScenarioError::UnknownState { location, label }) => {
                assert_eq!(location, "events[election]");
                assert_eq!(label, "w9");
            }
            other => panic!("expected unknown-state diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_rationals_with_location() {
        let mut doc = minimal_doc();
        doc.prior.insert("w1".into(), "0.25".into());
        match Scenario::from_doc(&doc) {
            Err(ScenarioError::MalformedRational { location, text, .. }) => {
                assert_eq!(location, "prior[w1]");
                assert_eq!(text, "0.25");
            }
            other => panic!("expected malformed-rational diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_partition_cells() {
        let mut doc = minimal_doc();
        doc.traders[0].partition = vec![vec!["w1".into(), "w2".into()], vec!["w2".into()]];
        match Scenario::from_doc(&doc) {
            Err(ScenarioError::BadPartition { trader, .. }) => assert_eq!(trader, "analyst"),
            other => panic!("expected partition diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn scoring_defaults_to_unit_scale() {
        let mut doc = minimal_doc();
        doc.scoring = None;
        let scenario = Scenario::from_doc(&doc).unwrap();
        assert_eq!(scenario.b, Rational::one());
    }

    #[test]
    fn doc_round_trip_is_structurally_identical() {
        let scenario = Scenario::from_doc(&minimal_doc()).unwrap();
        let doc = scenario.to_doc();
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let reparsed: ScenarioDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(reparsed, doc);
        assert_eq!(Scenario::from_doc(&reparsed).unwrap(), scenario);
    }
}
