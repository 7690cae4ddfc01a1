//! Brier scoring for vector expectations and market-scoring-rule payments.
//!
//! A market scoring rule is a sequentially shared strictly proper scoring
//! rule: each prediction earns its own score but pays the score of the
//! prediction it displaced, so per-trader payments telescope to the total
//! improvement over the market maker's opening prediction.

use crate::dynamics::Trace;
use crate::error::{Error, Result};
use crate::model::SecuritySet;
use crate::rational::{squared_distance, Rational};
use num_traits::Zero;

/// Contract for strictly proper scoring rules over vector reports. The
/// dynamics and settlement code depend only on this interface.
pub trait ScoringRule {
    /// Score of reporting `report` when the securities realize `realization`.
    fn score(&self, report: &[Rational], realization: &[Rational]) -> Result<Rational>;
}

/// The quadratic (Brier) scoring rule `s(y, X(ω)) = -b·‖y - X(ω)‖²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrierRule {
    b: Rational,
}

impl BrierRule {
    pub fn new(b: Rational) -> Result<Self> {
        if b <= Rational::zero() {
            return Err(Error::NonPositiveScale);
        }
        Ok(Self { b })
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }
}

impl Default for BrierRule {
    fn default() -> Self {
        Self {
            b: Rational::from_integer(1.into()),
        }
    }
}

impl ScoringRule for BrierRule {
    fn score(&self, report: &[Rational], realization: &[Rational]) -> Result<Rational> {
        brier_score(report, realization, self)
    }
}

/// `-b·Σ_j (y_j - x_j)²`, exact.
pub fn brier_score(
    report: &[Rational],
    realization: &[Rational],
    rule: &BrierRule,
) -> Result<Rational> {
    if report.len() != realization.len() {
        return Err(Error::DimensionMismatch {
            expected: realization.len(),
            got: report.len(),
        });
    }
    Ok(-&rule.b * squared_distance(report, realization))
}

/// Expected score `Σ_ω P(ω)·s(report, X(ω))` of a report under belief `P`.
pub fn expected_score<R: ScoringRule>(
    p: &crate::model::Distribution,
    report: &[Rational],
    securities: &SecuritySet,
    rule: &R,
) -> Result<Rational> {
    if p.n_states() != securities.n_states() {
        return Err(Error::StateSpaceMismatch {
            left: p.n_states(),
            right: securities.n_states(),
        });
    }
    let mut total = Rational::zero();
    for state in 0..p.n_states() {
        let w = p.mass(state);
        if w.is_zero() {
            continue;
        }
        total += w * rule.score(report, securities.row(state))?;
    }
    Ok(total)
}

/// Score and net payment of one settled prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettledPrediction {
    pub round: usize,
    pub trader: usize,
    pub score: Rational,
    /// Own score minus the predecessor's score.
    pub payment: Rational,
}

/// Per-prediction scores and per-trader net payments for one trace.
///
/// Invariant: the trader nets sum exactly to
/// `final score - initial score` (the telescoping identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaymentLedger {
    pub initial_score: Rational,
    pub final_score: Rational,
    pub entries: Vec<SettledPrediction>,
    /// Net payment per trader index.
    pub net_by_trader: Vec<Rational>,
}

impl PaymentLedger {
    pub fn total_net(&self) -> Rational {
        self.net_by_trader.iter().sum()
    }
}

/// Settles a trace at the realized state: every prediction earns its score
/// and pays the previous prediction's score.
pub fn settle<R: ScoringRule>(
    trace: &Trace,
    true_state: usize,
    securities: &SecuritySet,
    rule: &R,
) -> Result<PaymentLedger> {
    if true_state >= securities.n_states() {
        return Err(Error::StateOutOfRange {
            index: true_state,
            n_states: securities.n_states(),
        });
    }
    if trace.initial_prediction.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let realization = securities.row(true_state);
    let initial_score = rule.score(&trace.initial_prediction, realization)?;
    let mut previous = initial_score.clone();
    let mut entries = Vec::with_capacity(trace.announcements.len());
    let mut net_by_trader = vec![Rational::zero(); trace.n_traders];
    for a in &trace.announcements {
        let score = rule.score(&a.prediction, realization)?;
        let payment = &score - &previous;
        net_by_trader[a.trader] += &payment;
        entries.push(SettledPrediction {
            round: a.round,
            trader: a.trader,
            score: score.clone(),
            payment,
        });
        previous = score;
    }
    Ok(PaymentLedger {
        initial_score,
        final_score: previous,
        entries,
        net_by_trader,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, Announcement, Termination, Trace};
    use crate::model::{Distribution, Event, Partition, SecuritySet, SignalStructure};
    use crate::rational::{rat, rat_int};

    #[test]
    fn matching_report_scores_zero() {
        let rule = BrierRule::default();
        let y = vec![rat(1, 3), rat(2, 5)];
        assert_eq!(brier_score(&y, &y, &rule).unwrap(), rat_int(0));
    }

    #[test]
    fn half_versus_one_scores_quarter_loss() {
        let rule = BrierRule::default();
        assert_eq!(
            brier_score(&[rat(1, 2)], &[rat_int(1)], &rule).unwrap(),
            rat(-1, 4)
        );
    }

    #[test]
    fn scale_doubles_the_loss() {
        let rule = BrierRule::new(rat_int(2)).unwrap();
        assert_eq!(
            brier_score(&[rat(1, 2), rat(1, 2)], &[rat_int(1), rat_int(0)], &rule).unwrap(),
            rat_int(-1)
        );
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let rule = BrierRule::default();
        assert!(matches!(
            brier_score(&[rat_int(0)], &[rat_int(0), rat_int(1)], &rule),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_positive_scale() {
        assert_eq!(BrierRule::new(rat_int(0)).unwrap_err(), Error::NonPositiveScale);
        assert_eq!(
            BrierRule::new(rat_int(-1)).unwrap_err(),
            Error::NonPositiveScale
        );
    }

    fn one_state_indicator() -> SecuritySet {
        SecuritySet::from_events(["first"], 2, &[Event::new(2, [0]).unwrap()]).unwrap()
    }

    #[test]
    fn expected_score_matches_hand_arithmetic() {
        // P = (1/4, 3/4), X = indicator of the first state, report 1/4:
        // -(1/4·(3/4)² + 3/4·(1/4)²) = -3/16.
        let p = Distribution::new(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let x = one_state_indicator();
        let rule = BrierRule::default();
        assert_eq!(
            expected_score(&p, &[rat(1, 4)], &x, &rule).unwrap(),
            rat(-3, 16)
        );
    }

    #[test]
    fn truthful_report_is_strictly_best() {
        let p = Distribution::new(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let x = one_state_indicator();
        let rule = BrierRule::default();
        let truth = crate::model::expectation(&p, &x).unwrap();
        let best = expected_score(&p, &truth, &x, &rule).unwrap();
        for delta in [rat(1, 100), rat(-1, 100), rat_int(1), rat(-1, 3)] {
            let shifted = vec![&truth[0] + &delta];
            assert!(expected_score(&p, &shifted, &x, &rule).unwrap() < best);
        }
    }

    #[test]
    fn uniform_two_state_expected_score_peaks_at_half() {
        let p = Distribution::uniform(2);
        let x = one_state_indicator();
        let rule = BrierRule::default();
        let at = |y: Rational| expected_score(&p, &[y], &x, &rule).unwrap();
        // -b((y-1)² + y²)/2 evaluated at a few points, maximized at 1/2.
        assert_eq!(at(rat(1, 2)), rat(-1, 4));
        assert!(at(rat(1, 2)) > at(rat_int(0)));
        assert!(at(rat(1, 2)) > at(rat_int(1)));
        assert!(at(rat(1, 2)) > at(rat(2, 3)));
    }

    fn manual_trace(n_traders: usize, predictions: Vec<(usize, Vec<Rational>)>) -> Trace {
        // Build a trace by hand; public sets are irrelevant to settlement.
        let announcements = predictions
            .into_iter()
            .enumerate()
            .map(|(i, (trader, prediction))| Announcement {
                round: i + 1,
                trader,
                prediction,
                public_after: Event::full(2),
            })
            .collect();
        Trace {
            true_state: 0,
            n_traders,
            initial_prediction: vec![rat(1, 2)],
            initial_public: Event::full(2),
            announcements,
            termination: Termination::FixedPoint,
        }
    }

    #[test]
    fn settle_pays_improvement_over_opening() {
        // ŷ0 = 1/2, trader 0 moves to 1, payoff realizes at 1:
        // trader nets 0 - (-1/4) = 1/4.
        let x = one_state_indicator();
        let trace = manual_trace(1, vec![(0, vec![rat_int(1)])]);
        let ledger = settle(&trace, 0, &x, &BrierRule::default()).unwrap();
        assert_eq!(ledger.net_by_trader, vec![rat(1, 4)]);
        assert_eq!(ledger.total_net(), &ledger.final_score - &ledger.initial_score);
    }

    #[test]
    fn repeating_the_previous_prediction_nets_zero() {
        let x = one_state_indicator();
        let trace = manual_trace(2, vec![(0, vec![rat_int(1)]), (1, vec![rat_int(1)])]);
        let ledger = settle(&trace, 0, &x, &BrierRule::default()).unwrap();
        assert_eq!(ledger.entries[1].payment, rat_int(0));
        assert_eq!(ledger.net_by_trader[1], rat_int(0));
    }

    #[test]
    fn two_security_run_pays_half_in_total() {
        // Both-securities market from four states; settled at the state where
        // both securities pay 1, total payout is 0 - (-1/2) = 1/2.
        let signals = SignalStructure::new(vec![
            Partition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap(),
            Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap(),
        ])
        .unwrap();
        let securities = SecuritySet::from_events(
            ["election", "iowa"],
            4,
            &[Event::new(4, [0, 1]).unwrap(), Event::new(4, [0, 2]).unwrap()],
        )
        .unwrap();
        let prior = Distribution::uniform(4);
        let trace = simulate(&prior, &signals, &securities, 0, 5).unwrap();
        let ledger = settle(&trace, 0, &securities, &BrierRule::default()).unwrap();
        assert_eq!(ledger.initial_score, rat(-1, 2));
        assert_eq!(ledger.final_score, rat_int(0));
        assert_eq!(ledger.total_net(), rat(1, 2));
    }

    #[test]
    fn scaling_b_scales_every_payment() {
        let x = one_state_indicator();
        let trace = manual_trace(2, vec![(0, vec![rat(3, 4)]), (1, vec![rat_int(1)])]);
        let base = settle(&trace, 0, &x, &BrierRule::default()).unwrap();
        let scaled = settle(&trace, 0, &x, &BrierRule::new(rat_int(3)).unwrap()).unwrap();
        for (a, b) in base.net_by_trader.iter().zip(&scaled.net_by_trader) {
            assert_eq!(b, &(a * rat_int(3)));
        }
    }
}
