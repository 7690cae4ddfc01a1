//! Exact decision and semi-decision procedures for completeness,
//! distinguishability, separability, and informativeness.
//!
//! Completeness and distinguishability are decided exactly (rational
//! elimination and exact LPs). Separability has no general decision
//! procedure here, so the verdict is three-valued: a verified witness
//! refutes it, a structural certificate confirms it, and everything else is
//! an honest `Unknown`. No verdict is ever emitted unsoundly.

use crate::dynamics::{simulate, stall_witness};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{
    conditional_expectation, Distribution, Event, SecuritySet, SignalStructure,
};
use crate::rational::{rat_int, Rational};
use crate::sampling::{sample_prior, Rng, DEFAULT_MAX_NUMERATOR};
use crate::simplex::{solve_equality_form, LpOutcome, LpSense};
use num_traits::Zero;

/// A candidate false consensus: a distribution and the common valuation it
/// pins every trader to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub distribution: Distribution,
    pub consensus: Vec<Rational>,
}

/// Structural reasons a security set is separable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparabilityCertificate {
    /// The augmented payoff matrix has full rank, so expectations pin down
    /// the distribution.
    CompleteMarket,
    /// Some trader's partition equals the join, so a unanimous consensus
    /// already reflects the pooled signals.
    FullyInformedTrader { trader: usize },
    /// The join is all singletons and every security decomposes as a sum of
    /// per-trader signal values; `values[security][signal]` lists the
    /// decomposition in global signal order (traders in order, cells in
    /// canonical order).
    SignalSumForm { values: Vec<Vec<Rational>> },
}

/// How much work a witness search performed before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchEffort {
    pub trials: u64,
    pub simulations: u64,
}

/// Outcome of separability analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparabilityVerdict {
    /// A verified witness: some prior admits a false consensus.
    NonSeparable(Witness),
    /// A structural certificate of separability.
    SeparableCertified(SeparabilityCertificate),
    /// Neither a witness nor a certificate was found within budget.
    Unknown(SearchEffort),
}

/// Two post-aggregation beliefs with equal security expectations but
/// different event probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishabilityCounterexample {
    pub p: Distribution,
    pub p_prime: Distribution,
    /// `P(E) - P'(E)`, nonzero.
    pub gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventReport {
    pub event: Event,
    pub distinguished: bool,
    pub counterexample: Option<DistinguishabilityCounterexample>,
}

/// Per-event distinguishability verdicts.
///
/// Pairs of beliefs are quantified over *all* pairs of join elements,
/// including beliefs supported in different elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishabilityReport {
    pub events: Vec<EventReport>,
}

impl DistinguishabilityReport {
    pub fn all_distinguished(&self) -> bool {
        self.events.iter().all(|e| e.distinguished)
    }
}

/// Combined verdict for informativeness on a set of events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InformativenessVerdict {
    Informative {
        certificate: SeparabilityCertificate,
        distinguishability: DistinguishabilityReport,
    },
    NotInformative {
        distinguishability: DistinguishabilityReport,
        /// Present when the failure is non-separability rather than a
        /// distinguishability counterexample.
        witness: Option<Witness>,
    },
    Undetermined {
        distinguishability: DistinguishabilityReport,
        effort: SearchEffort,
    },
}

/// A market is complete exactly when the payoff matrix augmented with a
/// constant column has rank `|Ω|`.
pub fn is_complete(securities: &SecuritySet) -> bool {
    securities.augmented_matrix().rank() == securities.n_states()
}

/// Exact distinguishability check (one LP pair per ordered pair of join
/// elements per event).
pub fn distinguishes(
    securities: &SecuritySet,
    events: &[Event],
    signals: &SignalStructure,
) -> Result<DistinguishabilityReport> {
    let n = securities.n_states();
    if signals.n_states() != n {
        return Err(Error::StateSpaceMismatch {
            left: n,
            right: signals.n_states(),
        });
    }
    for event in events {
        if event.n_states() != n {
            return Err(Error::StateSpaceMismatch {
                left: n,
                right: event.n_states(),
            });
        }
    }
    let cells = signals.join().cells();
    let mut reports = Vec::with_capacity(events.len());
    for event in events {
        let mut counterexample = None;
        'pairs: for i in 0..cells.len() {
            for j in i..cells.len() {
                if let Some(cx) = pair_counterexample(securities, event, &cells[i], &cells[j])? {
                    counterexample = Some(cx);
                    break 'pairs;
                }
            }
        }
        reports.push(EventReport {
            event: event.clone(),
            distinguished: counterexample.is_none(),
            counterexample,
        });
    }
    Ok(DistinguishabilityReport { events: reports })
}

/// Maximizes and minimizes `P(E) - P'(E)` over belief pairs supported within
/// the two join elements and constrained to equal security expectations.
/// Returns a counterexample when either optimum is nonzero. Unordered pairs
/// suffice: swapping the roles of the elements only flips the sign.
fn pair_counterexample(
    securities: &SecuritySet,
    event: &Event,
    cell_a: &[usize],
    cell_b: &[usize],
) -> Result<Option<DistinguishabilityCounterexample>> {
    let n_vars = cell_a.len() + cell_b.len();
    let m = securities.n_securities();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(2 + m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(2 + m);

    // Each belief is a probability vector on its cell.
    let mut row = vec![Rational::zero(); n_vars];
    for v in row.iter_mut().take(cell_a.len()) {
        *v = rat_int(1);
    }
    rows.push(row);
    rhs.push(rat_int(1));
    let mut row = vec![Rational::zero(); n_vars];
    for v in row.iter_mut().skip(cell_a.len()) {
        *v = rat_int(1);
    }
    rows.push(row);
    rhs.push(rat_int(1));

    // Equal expectations, security by security.
    for sec in 0..m {
        let mut row = Vec::with_capacity(n_vars);
        for &state in cell_a {
            row.push(securities.payoff(state, sec).clone());
        }
        for &state in cell_b {
            row.push(-securities.payoff(state, sec));
        }
        rows.push(row);
        rhs.push(Rational::zero());
    }

    // Objective: probability gap on the event.
    let mut objective = Vec::with_capacity(n_vars);
    for &state in cell_a {
        objective.push(if event.contains(state) {
            rat_int(1)
        } else {
            Rational::zero()
        });
    }
    for &state in cell_b {
        objective.push(if event.contains(state) {
            rat_int(-1)
        } else {
            Rational::zero()
        });
    }

    for sense in [LpSense::Maximize, LpSense::Minimize] {
        match solve_equality_form(&objective, sense, &rows, &rhs) {
            LpOutcome::Infeasible => return Ok(None), // cross pair vacuously fine
            LpOutcome::Unbounded => {
                unreachable!("probability polytopes are bounded")
            }
            LpOutcome::Optimal { value, solution } => {
                if !value.is_zero() {
                    let n = securities.n_states();
                    let mut p_mass = vec![Rational::zero(); n];
                    for (k, &state) in cell_a.iter().enumerate() {
                        p_mass[state] = solution[k].clone();
                    }
                    let mut q_mass = vec![Rational::zero(); n];
                    for (k, &state) in cell_b.iter().enumerate() {
                        q_mass[state] = solution[cell_a.len() + k].clone();
                    }
                    return Ok(Some(DistinguishabilityCounterexample {
                        p: Distribution::new(p_mass)?,
                        p_prime: Distribution::new(q_mass)?,
                        gap: value,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Checks a witness exactly: (a) every trader's cell-conditional expectation
/// equals the consensus on the support, and (b) some supported state's
/// join-conditional expectation differs from it.
pub fn verify_witness(
    witness: &Witness,
    securities: &SecuritySet,
    signals: &SignalStructure,
) -> Result<bool> {
    let n = securities.n_states();
    if witness.distribution.n_states() != n || signals.n_states() != n {
        return Err(Error::StateSpaceMismatch {
            left: n,
            right: witness.distribution.n_states(),
        });
    }
    if witness.consensus.len() != securities.n_securities() {
        return Err(Error::DimensionMismatch {
            expected: securities.n_securities(),
            got: witness.consensus.len(),
        });
    }
    let support = witness.distribution.support();
    if support.is_empty() {
        return Ok(false);
    }
    let p = &witness.distribution;

    for partition in signals.partitions() {
        for cell in partition.cells() {
            if !cell.iter().any(|&s| support.contains(s)) {
                continue;
            }
            let cell_event = Event::new(n, cell.iter().copied())?;
            if conditional_expectation(p, securities, &cell_event)? != witness.consensus {
                return Ok(false);
            }
        }
    }
    for cell in signals.join().cells() {
        if !cell.iter().any(|&s| support.contains(s)) {
            continue;
        }
        let cell_event = Event::new(n, cell.iter().copied())?;
        if conditional_expectation(p, securities, &cell_event)? != witness.consensus {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Looks for a structural separability certificate: a complete market, a
/// fully informed trader, or (under a singleton join) a per-signal sum
/// decomposition of every security.
pub fn separability_certificate(
    securities: &SecuritySet,
    signals: &SignalStructure,
) -> Option<SeparabilityCertificate> {
    if is_complete(securities) {
        return Some(SeparabilityCertificate::CompleteMarket);
    }
    if let Some(trader) = signals.fully_informed_trader() {
        return Some(SeparabilityCertificate::FullyInformedTrader { trader });
    }
    if signals.join().is_singletons() {
        if let Some(values) = sum_form_values(securities, signals) {
            return Some(SeparabilityCertificate::SignalSumForm { values });
        }
    }
    None
}

/// Solves for per-signal values `f` such that every security's payoff is
/// `x(ω) = Σ_i f(Π_i(ω))`. Returns one value vector per security (in global
/// signal order) when every system is consistent.
pub fn sum_form_values(
    securities: &SecuritySet,
    signals: &SignalStructure,
) -> Option<Vec<Vec<Rational>>> {
    let n = securities.n_states();
    if signals.n_states() != n {
        return None;
    }
    // Global signal enumeration: traders in order, cells in canonical order.
    let mut offsets = Vec::with_capacity(signals.n_traders());
    let mut total = 0usize;
    for partition in signals.partitions() {
        offsets.push(total);
        total += partition.n_cells();
    }
    let mut rows = Vec::with_capacity(n);
    for state in 0..n {
        let mut row = vec![Rational::zero(); total];
        for (trader, partition) in signals.partitions().iter().enumerate() {
            row[offsets[trader] + partition.cell_index_of(state)] = rat_int(1);
        }
        rows.push(row);
    }
    let coefficients = Matrix::from_rows(rows);
    let mut values = Vec::with_capacity(securities.n_securities());
    for sec in 0..securities.n_securities() {
        let column: Vec<Rational> = (0..n)
            .map(|state| securities.payoff(state, sec).clone())
            .collect();
        values.push(coefficients.solve(&column)?);
    }
    Some(values)
}

/// Pure sampling search for a non-separability witness (no certificate
/// shortcut): trial 0 is the uniform full-support prior, later trials draw
/// random supports and numerators. Every stalled run yields a witness,
/// which is verified exactly before being returned.
pub fn stall_search(
    securities: &SecuritySet,
    signals: &SignalStructure,
    budget: u64,
    seed: u64,
) -> Result<(Option<Witness>, SearchEffort)> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let n = securities.n_states();
    let mut rng = Rng::new(seed);
    let mut effort = SearchEffort {
        trials: 0,
        simulations: 0,
    };
    for trial in 0..budget {
        let prior = if trial == 0 {
            Distribution::uniform(n)
        } else {
            sample_prior(n, DEFAULT_MAX_NUMERATOR, &mut rng)?
        };
        effort.trials += 1;
        for &true_state in prior.support().members() {
            let trace = simulate(&prior, signals, securities, true_state, n + 1)?;
            effort.simulations += 1;
            if let Some(witness) = stall_witness(&trace, &prior, signals, securities)? {
                if verify_witness(&witness, securities, signals)? {
                    return Ok((Some(witness), effort));
                }
                debug_assert!(false, "stall witnesses verify by construction");
            }
        }
    }
    Ok((None, effort))
}

/// Three-valued separability decision: certify structurally when possible,
/// otherwise search for a witness through the dynamics.
pub fn search_witness(
    securities: &SecuritySet,
    signals: &SignalStructure,
    budget: u64,
    seed: u64,
) -> Result<SeparabilityVerdict> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    if let Some(certificate) = separability_certificate(securities, signals) {
        return Ok(SeparabilityVerdict::SeparableCertified(certificate));
    }
    let (witness, effort) = stall_search(securities, signals, budget, seed)?;
    Ok(match witness {
        Some(w) => SeparabilityVerdict::NonSeparable(w),
        None => SeparabilityVerdict::Unknown(effort),
    })
}

/// Informative = distinguishes every event (exact) and separable (certified
/// or unrefuted-within-budget, in which case the verdict stays undetermined).
pub fn is_informative(
    securities: &SecuritySet,
    events: &[Event],
    signals: &SignalStructure,
    budget: u64,
    seed: u64,
) -> Result<InformativenessVerdict> {
    let report = distinguishes(securities, events, signals)?;
    if !report.all_distinguished() {
        return Ok(InformativenessVerdict::NotInformative {
            distinguishability: report,
            witness: None,
        });
    }
    Ok(match search_witness(securities, signals, budget, seed)? {
        SeparabilityVerdict::SeparableCertified(certificate) => {
            InformativenessVerdict::Informative {
                certificate,
                distinguishability: report,
            }
        }
        SeparabilityVerdict::NonSeparable(witness) => InformativenessVerdict::NotInformative {
            distinguishability: report,
            witness: Some(witness),
        },
        SeparabilityVerdict::Unknown(effort) => InformativenessVerdict::Undetermined {
            distinguishability: report,
            effort,
        },
    })
}
