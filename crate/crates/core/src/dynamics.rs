//! Market scoring rule dynamics with myopic Bayesian traders.
//!
//! Traders take turns announcing their current conditional expectation of
//! the securities. Observers know the traders are myopic, so after each
//! announcement the public possibility set drops every state that would
//! have produced a different announcement. This is the classic
//! common-knowledge refinement loop; it reaches a fixed point after at most
//! `|Ω|` recorded rounds because the public set can only shrink.

use crate::certify::Witness;
use crate::error::{Error, Result};
use crate::model::{
    conditional_expectation, expectation, Distribution, Event, SecuritySet, SignalStructure,
};
use crate::rational::Rational;
use num_traits::Zero;

/// The set of states consistent with every announcement made so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicState {
    possible: Event,
}

impl PublicState {
    /// Starts from the prior's support: zero-probability states can never be
    /// the true state and have no conditional expectations.
    pub fn initial(prior: &Distribution) -> Self {
        Self {
            possible: prior.support(),
        }
    }

    pub fn possible(&self) -> &Event {
        &self.possible
    }

    /// Keeps only the states a myopic announcer could have been in: those
    /// whose cell-conditional expectation matches the announcement.
    fn refine(
        &mut self,
        prior: &Distribution,
        signals: &SignalStructure,
        securities: &SecuritySet,
        trader: usize,
        announcement: &[Rational],
    ) -> Result<bool> {
        let mut keep = Vec::with_capacity(self.possible.len());
        for &state in self.possible.members() {
            let cell = self
                .possible
                .intersect_slice(signals.partition(trader).cell_of(state));
            let view = conditional_expectation(prior, securities, &cell)?;
            if view == announcement {
                keep.push(state);
            }
        }
        let changed = keep.len() != self.possible.len();
        self.possible = Event::new(self.possible.n_states(), keep)?;
        Ok(changed)
    }
}

/// One recorded announcement: the prediction and the public set after the
/// observers processed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Announcement {
    /// 1-based full round number.
    pub round: usize,
    /// 0-based trader index.
    pub trader: usize,
    pub prediction: Vec<Rational>,
    pub public_after: Event,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// A further full round provably changes nothing.
    FixedPoint,
    /// The round cap was reached first.
    RoundCap,
}

/// The full record of one dynamics run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub true_state: usize,
    pub n_traders: usize,
    /// The market maker's opening prediction `E_P₀[X]`.
    pub initial_prediction: Vec<Rational>,
    /// Support of the prior: the public set before any announcement.
    pub initial_public: Event,
    pub announcements: Vec<Announcement>,
    pub termination: Termination,
}

impl Trace {
    pub fn final_prediction(&self) -> &[Rational] {
        self.announcements
            .last()
            .map(|a| a.prediction.as_slice())
            .unwrap_or(&self.initial_prediction)
    }

    pub fn final_public(&self) -> &Event {
        self.announcements
            .last()
            .map(|a| &a.public_after)
            .unwrap_or(&self.initial_public)
    }

    /// Number of completed full rounds.
    pub fn rounds(&self) -> usize {
        self.announcements.last().map_or(0, |a| a.round)
    }

    /// The prediction standing after the `position`-th announcement
    /// (1-based); the trace is constant past its fixed point.
    pub fn prediction_at(&self, position: usize) -> &[Rational] {
        if position == 0 {
            return &self.initial_prediction;
        }
        match self.announcements.get(position - 1) {
            Some(a) => &a.prediction,
            None => self.final_prediction(),
        }
    }
}

/// Runs the myopic trading loop from `true_state`.
///
/// Round by round each trader announces `E_P₀[X | Π_i(ω*) ∩ S]` and the
/// public set is refined. The loop stops at the first completed round after
/// which one further round would leave both the public set and the
/// consensus unchanged (a provable fixed point), or at `max_rounds`.
pub fn simulate(
    prior: &Distribution,
    signals: &SignalStructure,
    securities: &SecuritySet,
    true_state: usize,
    max_rounds: usize,
) -> Result<Trace> {
    let n = prior.n_states();
    if signals.n_states() != n || securities.n_states() != n {
        return Err(Error::StateSpaceMismatch {
            left: n,
            right: if signals.n_states() != n {
                signals.n_states()
            } else {
                securities.n_states()
            },
        });
    }
    if true_state >= n {
        return Err(Error::StateOutOfRange {
            index: true_state,
            n_states: n,
        });
    }
    if prior.mass(true_state).is_zero() {
        return Err(Error::ImpossibleTrueState);
    }
    if max_rounds == 0 {
        return Err(Error::ZeroRounds);
    }

    let mut public = PublicState::initial(prior);
    let initial_public = public.possible().clone();
    let initial_prediction = expectation(prior, securities)?;
    let mut announcements: Vec<Announcement> = Vec::new();
    let mut last_prediction = initial_prediction.clone();

    let termination = loop {
        let round = announcements.len() / signals.n_traders() + 1;
        for trader in 0..signals.n_traders() {
            let own_cell = public
                .possible()
                .intersect_slice(signals.partition(trader).cell_of(true_state));
            let prediction = conditional_expectation(prior, securities, &own_cell)?;
            public.refine(prior, signals, securities, trader, &prediction)?;
            announcements.push(Announcement {
                round,
                trader,
                prediction: prediction.clone(),
                public_after: public.possible().clone(),
            });
            last_prediction = prediction;
        }
        if is_fixed_point(prior, signals, securities, public.possible(), &last_prediction)? {
            break Termination::FixedPoint;
        }
        if round >= max_rounds {
            break Termination::RoundCap;
        }
    };

    Ok(Trace {
        true_state,
        n_traders: signals.n_traders(),
        initial_prediction,
        initial_public,
        announcements,
        termination,
    })
}

/// True when one further full round would repeat `consensus` from every
/// trader and eliminate nothing: every surviving state's cell-conditional
/// expectation already equals the consensus for every trader.
fn is_fixed_point(
    prior: &Distribution,
    signals: &SignalStructure,
    securities: &SecuritySet,
    public: &Event,
    consensus: &[Rational],
) -> Result<bool> {
    for trader in 0..signals.n_traders() {
        for &state in public.members() {
            let cell = public.intersect_slice(signals.partition(trader).cell_of(state));
            let view = conditional_expectation(prior, securities, &cell)?;
            if view != consensus {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The aggregation target `E_P₀[X | Π(ω*)]`: the expectation given the
/// pooled private signals.
pub fn pooled_expectation(
    prior: &Distribution,
    signals: &SignalStructure,
    securities: &SecuritySet,
    true_state: usize,
) -> Result<Vec<Rational>> {
    let cell = Event::new(
        prior.n_states(),
        signals.join().cell_of(true_state).iter().copied(),
    )?;
    conditional_expectation(prior, securities, &cell)
}

/// True exactly when the trace's final prediction equals the pooled-signal
/// expectation for its true state.
pub fn aggregated(
    trace: &Trace,
    prior: &Distribution,
    signals: &SignalStructure,
    securities: &SecuritySet,
) -> Result<bool> {
    let target = pooled_expectation(prior, signals, securities, trace.true_state)?;
    Ok(trace.final_prediction() == target)
}

/// Extracts a non-separability witness from a stalled run: the prior
/// conditioned on the final public set, paired with the stuck consensus.
/// Returns `None` when the run aggregated; errors when the trace was cut off
/// by the round cap rather than reaching a fixed point.
pub fn stall_witness(
    trace: &Trace,
    prior: &Distribution,
    signals: &SignalStructure,
    securities: &SecuritySet,
) -> Result<Option<Witness>> {
    if trace.termination != Termination::FixedPoint {
        return Err(Error::NotAFixedPoint);
    }
    if aggregated(trace, prior, signals, securities)? {
        return Ok(None);
    }
    Ok(Some(Witness {
        distribution: prior.condition(trace.final_public())?,
        consensus: trace.final_prediction().to_vec(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_witness;
    use crate::model::Partition;
    use crate::rational::{rat, rat_int};
    use crate::sampling::{sample_full_support_prior, sample_signal_structure, Rng};

    // Four-state election market: trader 0 knows the diagonal (whether the
    // caucus decides the election), trader 1 knows the caucus column.
    fn election_signals() -> SignalStructure {
        SignalStructure::new(vec![
            Partition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap(),
            Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap(),
        ])
        .unwrap()
    }

    fn election_only() -> SecuritySet {
        SecuritySet::from_events(["election"], 4, &[Event::new(4, [0, 1]).unwrap()]).unwrap()
    }

    fn election_and_iowa() -> SecuritySet {
        SecuritySet::from_events(
            ["election", "iowa"],
            4,
            &[Event::new(4, [0, 1]).unwrap(), Event::new(4, [0, 2]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn single_security_market_stalls_at_half() {
        let prior = Distribution::uniform(4);
        let signals = election_signals();
        let securities = election_only();
        for true_state in 0..4 {
            let trace = simulate(&prior, &signals, &securities, true_state, 5).unwrap();
            assert_eq!(trace.termination, Termination::FixedPoint);
            assert_eq!(trace.rounds(), 1);
            assert_eq!(trace.initial_prediction, vec![rat(1, 2)]);
            for a in &trace.announcements {
                assert_eq!(a.prediction, vec![rat(1, 2)]);
                assert_eq!(a.public_after, Event::full(4));
            }
            assert!(!aggregated(&trace, &prior, &signals, &securities).unwrap());
            let witness = stall_witness(&trace, &prior, &signals, &securities)
                .unwrap()
                .expect("stalled run yields a witness");
            assert_eq!(witness.distribution, Distribution::uniform(4));
            assert_eq!(witness.consensus, vec![rat(1, 2)]);
            assert!(verify_witness(&witness, &securities, &signals).unwrap());
        }
    }

    #[test]
    fn adding_the_iowa_security_aggregates_in_two_rounds() {
        let prior = Distribution::uniform(4);
        let signals = election_signals();
        let securities = election_and_iowa();
        let trace = simulate(&prior, &signals, &securities, 0, 5).unwrap();
        assert_eq!(trace.termination, Termination::FixedPoint);
        assert_eq!(trace.rounds(), 2);
        // Round 1: the diagonal trader learns nothing new, the caucus trader
        // reveals the caucus result.
        assert_eq!(trace.announcements[0].prediction, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(trace.announcements[0].public_after, Event::full(4));
        assert_eq!(trace.announcements[1].prediction, vec![rat(1, 2), rat_int(1)]);
        assert_eq!(
            trace.announcements[1].public_after,
            Event::new(4, [0, 2]).unwrap()
        );
        // Round 2: the diagonal trader now pins the state.
        assert_eq!(trace.announcements[2].prediction, vec![rat_int(1), rat_int(1)]);
        assert_eq!(trace.announcements[2].public_after, Event::new(4, [0]).unwrap());
        assert_eq!(trace.final_prediction(), &[rat_int(1), rat_int(1)]);
        assert!(aggregated(&trace, &prior, &signals, &securities).unwrap());
        assert!(stall_witness(&trace, &prior, &signals, &securities)
            .unwrap()
            .is_none());
    }

    #[test]
    fn two_security_market_aggregates_from_every_state() {
        let prior = Distribution::uniform(4);
        let signals = election_signals();
        let securities = election_and_iowa();
        for true_state in 0..4 {
            let trace = simulate(&prior, &signals, &securities, true_state, 5).unwrap();
            assert!(trace.rounds() <= 2);
            assert!(aggregated(&trace, &prior, &signals, &securities).unwrap());
            assert_eq!(
                trace.final_prediction(),
                securities.row(true_state),
                "singleton join pins the payoff row"
            );
        }
    }

    #[test]
    fn fully_informed_trader_reveals_payoff_in_one_round() {
        let signals =
            SignalStructure::new(vec![Partition::singletons(3)]).unwrap();
        let securities = SecuritySet::new(
            ["gauge"],
            vec![vec![rat_int(3)], vec![rat_int(7)], vec![rat(1, 2)]],
        )
        .unwrap();
        let prior = Distribution::new(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        for true_state in 0..3 {
            let trace = simulate(&prior, &signals, &securities, true_state, 4).unwrap();
            assert_eq!(trace.termination, Termination::FixedPoint);
            assert_eq!(trace.rounds(), 1);
            assert_eq!(trace.final_prediction(), securities.row(true_state));
            assert!(aggregated(&trace, &prior, &signals, &securities).unwrap());
        }
    }

    #[test]
    fn uninformed_traders_sit_at_the_prior() {
        let signals = SignalStructure::new(vec![Partition::trivial(3), Partition::trivial(3)])
            .unwrap();
        let securities =
            SecuritySet::from_events(["top"], 3, &[Event::new(3, [0]).unwrap()]).unwrap();
        let prior = Distribution::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let trace = simulate(&prior, &signals, &securities, 1, 4).unwrap();
        assert_eq!(trace.rounds(), 1);
        assert_eq!(trace.final_prediction(), &[rat(1, 2)]);
        // The join is trivial, so the pooled expectation is the prior's.
        assert!(aggregated(&trace, &prior, &signals, &securities).unwrap());
    }

    #[test]
    fn impossible_true_state_is_rejected() {
        let signals = SignalStructure::new(vec![Partition::trivial(2)]).unwrap();
        let securities =
            SecuritySet::from_events(["up"], 2, &[Event::new(2, [0]).unwrap()]).unwrap();
        let prior = Distribution::new(vec![rat_int(1), rat_int(0)]).unwrap();
        assert_eq!(
            simulate(&prior, &signals, &securities, 1, 3).unwrap_err(),
            Error::ImpossibleTrueState
        );
    }

    #[test]
    fn round_cap_flags_the_trace_and_blocks_witness_extraction() {
        let prior = Distribution::uniform(4);
        let signals = election_signals();
        let securities = election_and_iowa();
        let trace = simulate(&prior, &signals, &securities, 0, 1).unwrap();
        assert_eq!(trace.termination, Termination::RoundCap);
        assert_eq!(
            stall_witness(&trace, &prior, &signals, &securities).unwrap_err(),
            Error::NotAFixedPoint
        );
    }

    #[test]
    fn zero_prior_states_leave_the_public_set_immediately() {
        let signals = election_signals();
        let securities = election_only();
        let prior = Distribution::new(vec![rat(1, 2), rat(1, 2), rat_int(0), rat_int(0)]).unwrap();
        let trace = simulate(&prior, &signals, &securities, 0, 5).unwrap();
        assert_eq!(trace.initial_public, Event::new(4, [0, 1]).unwrap());
        for a in &trace.announcements {
            assert!(a.public_after.is_subset_of(&trace.initial_public));
        }
    }

    #[test]
    fn random_runs_shrink_monotonically_and_keep_the_truth() {
        let mut rng = Rng::new(2024);
        for _ in 0..60 {
            let n = 2 + rng.below(5) as usize;
            let signals = sample_signal_structure(n, 1 + rng.below(3) as usize, 3, &mut rng)
                .unwrap();
            let securities = SecuritySet::from_events(
                ["a"],
                n,
                &[Event::new(n, (0..n).filter(|_| rng.bool())).unwrap()],
            )
            .unwrap();
            let prior = sample_full_support_prior(n, 10, &mut rng).unwrap();
            for true_state in 0..n {
                // max_rounds = |Ω|+1 must always reach a fixed point.
                let trace =
                    simulate(&prior, &signals, &securities, true_state, n + 1).unwrap();
                assert_eq!(trace.termination, Termination::FixedPoint);
                let mut previous = trace.initial_public.clone();
                for a in &trace.announcements {
                    assert!(a.public_after.is_subset_of(&previous));
                    assert!(a.public_after.contains(true_state));
                    previous = a.public_after.clone();
                }
                // Fixed-point soundness: every surviving state agrees with
                // the consensus under every trader's cell.
                let consensus = trace.final_prediction();
                for trader in 0..signals.n_traders() {
                    for &state in trace.final_public().members() {
                        let cell = trace
                            .final_public()
                            .intersect_slice(signals.partition(trader).cell_of(state));
                        let view = conditional_expectation(&prior, &securities, &cell).unwrap();
                        assert_eq!(view, consensus);
                    }
                }
            }
        }
    }

    #[test]
    fn predictions_form_a_martingale_over_nature_draws() {
        let mut rng = Rng::new(99);
        for _ in 0..20 {
            let n = 2 + rng.below(4) as usize;
            let signals = sample_signal_structure(n, 2, 3, &mut rng).unwrap();
            let securities = SecuritySet::from_events(
                ["a"],
                n,
                &[Event::new(n, (0..n).filter(|_| rng.bool())).unwrap()],
            )
            .unwrap();
            let prior = sample_full_support_prior(n, 10, &mut rng).unwrap();
            let overall = expectation(&prior, &securities).unwrap();
            let traces: Vec<Trace> = (0..n)
                .map(|s| simulate(&prior, &signals, &securities, s, n + 1).unwrap())
                .collect();
            let max_position = traces
                .iter()
                .map(|t| t.announcements.len())
                .max()
                .unwrap();
            for position in 0..=max_position {
                let mut mixed = vec![Rational::zero(); securities.n_securities()];
                for (state, trace) in traces.iter().enumerate() {
                    let prediction = trace.prediction_at(position);
                    for (acc, v) in mixed.iter_mut().zip(prediction) {
                        *acc += prior.mass(state) * v;
                    }
                }
                assert_eq!(mixed, overall, "position {position}");
            }
        }
    }
}
