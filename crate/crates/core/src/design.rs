//! Security-set construction: complete markets, single informative
//! securities for known signal structures, adversarial signal structures
//! witnessing the linear-independence lower bound, and minimum
//! event-security selection with its set-cover correspondence.

use crate::certify::{separability_certificate, stall_search, SeparabilityCertificate};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{
    expectation, Distribution, Event, Partition, SecuritySet, SignalStructure, StateSpace,
};
use crate::rational::{rat_int, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

/// One Arrow-Debreu security per state (identity payoff matrix). Complete,
/// hence informative on every event under any signal structure.
pub fn complete_market(states: &StateSpace) -> SecuritySet {
    let n = states.len();
    let names: Vec<String> = states.labels().iter().map(|l| format!("ad_{l}")).collect();
    let payoffs = (0..n)
        .map(|row| {
            (0..n)
                .map(|col| if row == col { rat_int(1) } else { rat_int(0) })
                .collect()
        })
        .collect();
    SecuritySet::new(names, payoffs).expect("identity payoffs are valid")
}

/// Assignment of a unique identifier index (and value `base^index`) to every
/// signal of every trader, in deterministic order: traders in declaration
/// order, cells in canonical order within each trader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalIdentifierMap {
    pub base: u64,
    /// `values[trader][cell_index]` is the identifier value of that signal.
    pub values: Vec<Vec<BigInt>>,
}

impl SignalIdentifierMap {
    pub fn build(signals: &SignalStructure, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::BadBase);
        }
        let mut values = Vec::with_capacity(signals.n_traders());
        let mut index = 0u32;
        for partition in signals.partitions() {
            let mut per_cell = Vec::with_capacity(partition.n_cells());
            for _ in 0..partition.n_cells() {
                per_cell.push(BigInt::from(base).pow(index));
                index += 1;
            }
            values.push(per_cell);
        }
        Ok(Self { base, values })
    }

    pub fn value(&self, trader: usize, cell_index: usize) -> &BigInt {
        &self.values[trader][cell_index]
    }

    pub fn n_signals(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }
}

/// Builds the single security paying `Σ_i base^{identifier(Π_i(ω))}` in each
/// state. Requires a singleton join; payoff values are then pairwise
/// distinct across states, so the security is informative on every event.
pub fn single_informative_security(
    signals: &SignalStructure,
    base: u64,
) -> Result<(SecuritySet, SignalIdentifierMap)> {
    if !signals.join().is_singletons() {
        return Err(Error::NonSingletonJoin);
    }
    let map = SignalIdentifierMap::build(signals, base)?;
    let n = signals.n_states();
    let payoffs: Vec<Vec<Rational>> = (0..n)
        .map(|state| {
            let mut total = BigInt::zero();
            for (trader, partition) in signals.partitions().iter().enumerate() {
                total += map.value(trader, partition.cell_index_of(state));
            }
            vec![Rational::from_integer(total)]
        })
        .collect();
    let set = SecuritySet::new(["signal_sum"], payoffs)?;
    Ok((set, map))
}

/// Relabeling of join elements as states, for structures whose join is not
/// all singletons: run the market over the quotient, then recover
/// per-original-state probabilities within the identified element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinQuotient {
    pub states: StateSpace,
    pub signals: SignalStructure,
    /// Pushforward of the original prior, when one was supplied.
    pub prior: Option<Distribution>,
    /// Join cells in canonical order; quotient state `k` stands for `cells[k]`.
    pub cells: Vec<Vec<usize>>,
}

impl JoinQuotient {
    /// The original-state distribution implied by landing in quotient state
    /// `k`: the prior conditioned on that join element.
    pub fn recover(&self, original_prior: &Distribution, k: usize) -> Result<Distribution> {
        let cell = Event::new(original_prior.n_states(), self.cells[k].iter().copied())?;
        original_prior.condition(&cell)
    }
}

/// Quotients a signal structure by its join. Quotient states are labeled by
/// the smallest original state of each join element.
pub fn quotient_by_join(
    states: &StateSpace,
    signals: &SignalStructure,
    prior: Option<&Distribution>,
) -> Result<JoinQuotient> {
    if states.len() != signals.n_states() {
        return Err(Error::StateSpaceMismatch {
            left: states.len(),
            right: signals.n_states(),
        });
    }
    let cells: Vec<Vec<usize>> = signals.join().cells().to_vec();
    let labels: Vec<String> = cells
        .iter()
        .map(|cell| states.label(cell[0]).to_string())
        .collect();
    let quotient_states = StateSpace::new(labels)?;
    // Each join cell lies inside exactly one cell of every trader partition.
    let partitions = signals
        .partitions()
        .iter()
        .map(|partition| {
            let mut grouped: Vec<Vec<usize>> = vec![Vec::new(); partition.n_cells()];
            for (k, cell) in cells.iter().enumerate() {
                grouped[partition.cell_index_of(cell[0])].push(k);
            }
            grouped.retain(|g| !g.is_empty());
            Partition::new(cells.len(), grouped)
        })
        .collect::<Result<Vec<_>>>()?;
    let quotient_prior = prior
        .map(|p| {
            let mass = cells
                .iter()
                .map(|cell| cell.iter().map(|&s| p.mass(s).clone()).sum())
                .collect();
            Distribution::new(mass)
        })
        .transpose()?;
    Ok(JoinQuotient {
        states: quotient_states,
        signals: SignalStructure::new(partitions)?,
        prior: quotient_prior,
        cells,
    })
}

/// `min(|E|, |Ē|) - 1`, floored at zero: how many linearly independent
/// securities any always-informative market for the event must contain.
pub fn always_informative_lower_bound(event: &Event) -> usize {
    event
        .len()
        .min(event.n_states() - event.len())
        .saturating_sub(1)
}

/// An adversarial two-trader structure under which a too-small security set
/// stalls: the prior admits a false consensus, and the two in-event blocks
/// disagree about the event itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventCounterexample {
    pub signals: SignalStructure,
    pub prior: Distribution,
    pub consensus: Vec<Rational>,
    /// Disjointly supported distributions: inside the event, its alternate,
    /// outside the event, and its alternate.
    pub q_event: Distribution,
    pub q_event_alt: Distribution,
    pub q_outside: Distribution,
    pub q_outside_alt: Distribution,
}

/// Builds the counterexample structure for an event whose payoff matrix has
/// fewer than `min(|E|,|Ē|) - 1` linearly independent securities.
///
/// A nonzero vector orthogonal to the event-restricted payoffs (and to the
/// ones vector) splits into two disjoint same-expectation distributions over
/// event states; likewise outside the event. Pairing the blocks across two
/// traders makes every cell-conditional expectation equal while the join
/// still separates the blocks.
pub fn counterexample_signal_structure(
    securities: &SecuritySet,
    event: &Event,
) -> Result<EventCounterexample> {
    let n = securities.n_states();
    if event.n_states() != n {
        return Err(Error::StateSpaceMismatch {
            left: n,
            right: event.n_states(),
        });
    }
    let complement = event.complement();
    let bound = always_informative_lower_bound(event);
    if securities.payoff_matrix().rank() >= bound {
        return Err(Error::NoNullspace);
    }
    let (q_event, q_event_alt) = split_null_direction(securities, event.members())?;
    let (q_outside, q_outside_alt) = split_null_direction(securities, complement.members())?;

    let support = |d: &Distribution| d.support().members().to_vec();
    let union = |a: &Distribution, b: &Distribution| {
        let mut v = support(a);
        v.extend(support(b));
        v
    };
    let mut covered: Vec<usize> = [&q_event, &q_event_alt, &q_outside, &q_outside_alt]
        .iter()
        .flat_map(|d| support(d))
        .collect();
    covered.sort_unstable();
    let leftovers: Vec<usize> = (0..n).filter(|s| !covered.contains(s)).collect();

    let mut cells_one = vec![union(&q_event, &q_outside), union(&q_event_alt, &q_outside_alt)];
    let mut cells_two = vec![union(&q_event, &q_outside_alt), union(&q_event_alt, &q_outside)];
    if !leftovers.is_empty() {
        cells_one.push(leftovers.clone());
        cells_two.push(leftovers);
    }
    let signals = SignalStructure::new(vec![
        Partition::new(n, cells_one)?,
        Partition::new(n, cells_two)?,
    ])?;

    let quarter = Rational::new(1.into(), 4.into());
    let mass: Vec<Rational> = (0..n)
        .map(|s| {
            (q_event.mass(s) + q_event_alt.mass(s) + q_outside.mass(s) + q_outside_alt.mass(s))
                * &quarter
        })
        .collect();
    let prior = Distribution::new(mass)?;

    let inside = expectation(&q_event, securities)?;
    let outside = expectation(&q_outside, securities)?;
    let half = Rational::new(1.into(), 2.into());
    let consensus: Vec<Rational> = inside
        .iter()
        .zip(&outside)
        .map(|(a, b)| (a + b) * &half)
        .collect();

    Ok(EventCounterexample {
        signals,
        prior,
        consensus,
        q_event,
        q_event_alt,
        q_outside,
        q_outside_alt,
    })
}

/// Finds a nonzero vector over `subset` orthogonal to every security payoff
/// and to the ones vector, signs normalized so the first nonzero entry is
/// positive, and splits it into two disjointly supported distributions with
/// equal security expectations.
fn split_null_direction(
    securities: &SecuritySet,
    subset: &[usize],
) -> Result<(Distribution, Distribution)> {
    let rows: Vec<Vec<Rational>> = subset
        .iter()
        .map(|&state| {
            let mut row = securities.row(state).to_vec();
            row.push(rat_int(1));
            row
        })
        .collect();
    let kernel = Matrix::from_rows(rows).transpose().nullspace();
    let Some(direction) = kernel.into_iter().next() else {
        return Err(Error::NoNullspace);
    };
    let flip = direction
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v < &Rational::zero());
    let oriented: Vec<Rational> = if flip {
        direction.iter().map(|v| -v).collect()
    } else {
        direction
    };
    let n = securities.n_states();
    let mut positive = vec![Rational::zero(); n];
    let mut negative = vec![Rational::zero(); n];
    for (k, &state) in subset.iter().enumerate() {
        if oriented[k] > Rational::zero() {
            positive[state] = oriented[k].clone();
        } else if oriented[k] < Rational::zero() {
            negative[state] = -oriented[k].clone();
        }
    }
    Ok((
        Distribution::from_weights(positive)?,
        Distribution::from_weights(negative)?,
    ))
}

/// An unordered state pair that any informative selection must separate
/// because the two states disagree on an event of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparatingPair {
    pub a: usize,
    pub b: usize,
}

/// All state pairs differing on at least one event.
pub fn separating_pairs(n_states: usize, events: &[Event]) -> Vec<SeparatingPair> {
    let mut pairs = Vec::new();
    for a in 0..n_states {
        for b in (a + 1)..n_states {
            if events
                .iter()
                .any(|e| e.contains(a) != e.contains(b))
            {
                pairs.push(SeparatingPair { a, b });
            }
        }
    }
    pairs
}

/// A constrained-design problem: candidate event securities, the traders'
/// signal structure, and the events the selection must be informative on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignInstance {
    pub candidates: SecuritySet,
    pub signals: SignalStructure,
    pub events: Vec<Event>,
    pub provenance: Option<SetCoverProvenance>,
}

/// Marks an instance as produced by [`reduce_set_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverProvenance {
    /// Index of the added state outside every candidate's event.
    pub extra_state: usize,
}

impl DesignInstance {
    pub fn new(
        candidates: SecuritySet,
        signals: SignalStructure,
        events: Vec<Event>,
    ) -> Result<Self> {
        let n = candidates.n_states();
        if signals.n_states() != n {
            return Err(Error::StateSpaceMismatch {
                left: n,
                right: signals.n_states(),
            });
        }
        for event in &events {
            if event.n_states() != n {
                return Err(Error::StateSpaceMismatch {
                    left: n,
                    right: event.n_states(),
                });
            }
        }
        if !candidates.is_event_securities() {
            return Err(Error::InvalidSecuritySet(
                "candidates must be event securities paying 0 or 1".into(),
            ));
        }
        Ok(Self {
            candidates,
            signals,
            events,
            provenance: None,
        })
    }

    fn required_pairs(&self) -> Vec<SeparatingPair> {
        separating_pairs(self.candidates.n_states(), &self.events)
    }

    fn subset_separates(&self, subset: &[usize], pairs: &[SeparatingPair]) -> bool {
        pairs.iter().all(|pair| {
            subset
                .iter()
                .any(|&j| self.candidates.payoff(pair.a, j) != self.candidates.payoff(pair.b, j))
        })
    }
}

/// A certified minimum selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSetSolution {
    /// Candidate indices, ascending.
    pub selected: Vec<usize>,
    /// `None` only for the empty selection, which is vacuously separable
    /// (with no securities every conditional expectation is the empty
    /// vector, so no false consensus can exist).
    pub certificate: Option<SeparabilityCertificate>,
    /// Distinguished subsets of strictly smaller size whose separability
    /// could be neither certified nor refuted: the true optimum may be one
    /// of these.
    pub smaller_undetermined: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalSetResult {
    Found(MinimalSetSolution),
    /// Some subsets are distinguished and unrefuted but none could be
    /// certified; the listed subsets are the smallest such.
    Undetermined { unresolved: Vec<Vec<usize>> },
    Infeasible,
}

/// Exact minimum-cardinality selection: subsets are enumerated in increasing
/// size (then lexicographically), pruned by the separating-pair relaxation,
/// screened by the exact distinguishability LPs, and certified or searched
/// for separability.
pub fn minimal_event_set_exact(
    instance: &DesignInstance,
    budget: u64,
    seed: u64,
) -> Result<MinimalSetResult> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let pairs = instance.required_pairs();
    let n_candidates = instance.candidates.n_securities();
    let mut smaller_undetermined: Vec<Vec<usize>> = Vec::new();
    for size in 0..=n_candidates {
        let mut undetermined_at_size: Vec<Vec<usize>> = Vec::new();
        for subset in combinations(n_candidates, size) {
            if !instance.subset_separates(&subset, &pairs) {
                continue;
            }
            if subset.is_empty() {
                // Pairs were empty, so every event is trivial on the states.
                return Ok(MinimalSetResult::Found(MinimalSetSolution {
                    selected: subset,
                    certificate: None,
                    smaller_undetermined,
                }));
            }
            let selection = instance.candidates.select(&subset)?;
            let report = crate::certify::distinguishes(
                &selection,
                &instance.events,
                &instance.signals,
            )?;
            if !report.all_distinguished() {
                continue;
            }
            if let Some(certificate) = separability_certificate(&selection, &instance.signals) {
                return Ok(MinimalSetResult::Found(MinimalSetSolution {
                    selected: subset,
                    certificate: Some(certificate),
                    smaller_undetermined,
                }));
            }
            let (witness, _) = stall_search(&selection, &instance.signals, budget, seed)?;
            if witness.is_none() {
                undetermined_at_size.push(subset);
            }
        }
        smaller_undetermined.extend(undetermined_at_size);
    }
    if smaller_undetermined.is_empty() {
        Ok(MinimalSetResult::Infeasible)
    } else {
        let smallest = smaller_undetermined[0].len();
        Ok(MinimalSetResult::Undetermined {
            unresolved: smaller_undetermined
                .into_iter()
                .filter(|s| s.len() == smallest)
                .collect(),
        })
    }
}

/// Greedy selection for the fully-informed-trader case, where
/// informativeness reduces to separating every pair: repeatedly take the
/// candidate splitting the most unseparated pairs, ties to the lowest index.
pub fn minimal_event_set_greedy(instance: &DesignInstance) -> Result<Vec<usize>> {
    if instance
        .signals
        .partitions()
        .iter()
        .all(|p| !p.is_singletons())
    {
        return Err(Error::NoFullyInformedTrader);
    }
    let mut uncovered = instance.required_pairs();
    let n_candidates = instance.candidates.n_securities();
    let mut selected: Vec<usize> = Vec::new();
    while !uncovered.is_empty() {
        let separates = |j: usize, pair: &SeparatingPair| {
            instance.candidates.payoff(pair.a, j) != instance.candidates.payoff(pair.b, j)
        };
        let best = (0..n_candidates)
            .filter(|j| !selected.contains(j))
            .map(|j| (j, uncovered.iter().filter(|p| separates(j, p)).count()))
            .max_by(|(ja, ca), (jb, cb)| ca.cmp(cb).then(jb.cmp(ja)))
            .filter(|&(_, count)| count > 0);
        let Some((pick, _)) = best else {
            return Err(Error::Infeasible);
        };
        uncovered.retain(|p| !separates(pick, p));
        selected.push(pick);
    }
    Ok(selected)
}

/// Ascending-lexicographic k-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for next in start..=(n.saturating_sub(remaining)) {
            current.push(next);
            recurse(n, k, next + 1, current, out);
            current.pop();
        }
    }
    if k <= n {
        recurse(n, k, 0, &mut current, &mut out);
    }
    out
}

/// A set-cover instance: named subsets of a universe of labeled elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: Vec<String>,
    pub sets: Vec<NamedSubset>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSubset {
    pub name: String,
    pub members: Vec<String>,
}

/// The reduced design instance together with its state labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub states: StateSpace,
    pub instance: DesignInstance,
    /// The single event of interest: "some universe element occurred".
    pub event: Event,
}

/// Maps a set-cover instance to a constrained design problem: states are the
/// universe plus one extra state, a single fully informed trader, one
/// candidate event security per set, and the single event "not the extra
/// state". A candidate subset is informative exactly when the corresponding
/// sets cover the universe, so minimum sizes coincide.
pub fn reduce_set_cover(instance: &SetCoverInstance) -> Result<ReducedInstance> {
    for (i, element) in instance.universe.iter().enumerate() {
        if instance.universe[..i].contains(element) {
            return Err(Error::BadSetCoverInstance(format!(
                "duplicate universe element '{element}'"
            )));
        }
    }
    if instance.sets.is_empty() {
        return Err(Error::BadSetCoverInstance("no sets".into()));
    }
    for (i, set) in instance.sets.iter().enumerate() {
        if instance.sets[..i].iter().any(|s| s.name == set.name) {
            return Err(Error::DuplicateSetLabel(set.name.clone()));
        }
        for member in &set.members {
            if !instance.universe.contains(member) {
                return Err(Error::BadSetCoverInstance(format!(
                    "set '{}' contains '{member}' which is not in the universe",
                    set.name
                )));
            }
        }
    }
    let mut extra = "omega0".to_string();
    while instance.universe.contains(&extra) {
        extra.push('_');
    }
    let mut labels = instance.universe.clone();
    labels.push(extra);
    let states = StateSpace::new(labels)?;
    let n = states.len();

    let events: Vec<Event> = instance
        .sets
        .iter()
        .map(|set| {
            Event::new(
                n,
                set.members
                    .iter()
                    .map(|m| states.index_of(m).expect("validated above")),
            )
        })
        .collect::<Result<_>>()?;
    let names: Vec<String> = instance.sets.iter().map(|s| s.name.clone()).collect();
    let candidates = SecuritySet::from_events(names, n, &events)?;
    let signals = SignalStructure::new(vec![Partition::singletons(n)])?;
    let universe_event = Event::new(n, 0..instance.universe.len())?;
    let mut design = DesignInstance::new(candidates, signals, vec![universe_event.clone()])?;
    design.provenance = Some(SetCoverProvenance { extra_state: n - 1 });
    Ok(ReducedInstance {
        states,
        instance: design,
        event: universe_event,
    })
}
