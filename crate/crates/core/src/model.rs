//! States, events, distributions, partitions, signal structures, and
//! securities, together with the exact expectation operations everything
//! else is built on.
//!
//! All values are immutable after construction and all arithmetic is exact
//! rational, so any operation re-run on the same inputs is bit-identical.
//! The state ordering fixed at [`StateSpace`] construction governs every
//! matrix layout and tie-break in the crate.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{rat_int, Rational};
use num_traits::{One, Zero};

/// A finite set of mutually exclusive and exhaustive states of the world.
///
/// Labels are unique and their declaration order is fixed; states are
/// referred to by index everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateState(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty spaces
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A subset of the state space, stored as sorted state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    n_states: usize,
    members: Vec<usize>,
}

impl Event {
    /// Builds an event from state indices; duplicates collapse, order is
    /// normalized ascending.
    pub fn new<I: IntoIterator<Item = usize>>(n_states: usize, members: I) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= n_states {
                return Err(Error::StateOutOfRange {
                    index: last,
                    n_states,
                });
            }
        }
        Ok(Self { n_states, members })
    }

    pub fn full(n_states: usize) -> Self {
        Self {
            n_states,
            members: (0..n_states).collect(),
        }
    }

    pub fn empty(n_states: usize) -> Self {
        Self {
            n_states,
            members: Vec::new(),
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, state: usize) -> bool {
        self.members.binary_search(&state).is_ok()
    }

    pub fn complement(&self) -> Self {
        let members = (0..self.n_states).filter(|s| !self.contains(*s)).collect();
        Self {
            n_states: self.n_states,
            members,
        }
    }

    pub fn intersect(&self, other: &Event) -> Result<Self> {
        check_same_space(self.n_states, other.n_states)?;
        let members = self
            .members
            .iter()
            .copied()
            .filter(|s| other.contains(*s))
            .collect();
        Ok(Self {
            n_states: self.n_states,
            members,
        })
    }

    /// Intersection with a plain slice of state indices (e.g. a partition cell).
    pub fn intersect_slice(&self, states: &[usize]) -> Self {
        let members = states
            .iter()
            .copied()
            .filter(|s| self.contains(*s))
            .collect();
        Self {
            n_states: self.n_states,
            members,
        }
    }

    pub fn is_subset_of(&self, other: &Event) -> bool {
        self.members.iter().all(|s| other.contains(*s))
    }

    /// 0/1 indicator payoff column for this event.
    pub fn indicator(&self) -> Vec<Rational> {
        (0..self.n_states)
            .map(|s| {
                if self.contains(s) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }
}

fn check_same_space(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::StateSpaceMismatch { left, right });
    }
    Ok(())
}

/// An exact probability distribution over the state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    mass: Vec<Rational>,
}

impl Distribution {
    /// Validates non-negativity and an exact sum of 1.
    pub fn new(mass: Vec<Rational>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::InvalidDistribution("no states".into()));
        }
        if mass.iter().any(|m| m < &Rational::zero()) {
            return Err(Error::InvalidDistribution("negative mass".into()));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(Self { mass })
    }

    /// Normalizes non-negative weights (not all zero) into a distribution.
    pub fn from_weights(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidDistribution("all weights zero".into()));
        }
        let mass = weights.into_iter().map(|w| w / &total).collect();
        Ok(Self { mass })
    }

    pub fn uniform(n_states: usize) -> Self {
        let share = Rational::new(1.into(), (n_states as i64).into());
        Self {
            mass: vec![share; n_states],
        }
    }

    /// Uniform over a subset of states, zero elsewhere.
    pub fn uniform_over(n_states: usize, states: &[usize]) -> Result<Self> {
        let mut weights = vec![Rational::zero(); n_states];
        for &s in states {
            if s >= n_states {
                return Err(Error::StateOutOfRange { index: s, n_states });
            }
            weights[s] = Rational::one();
        }
        Self::from_weights(weights)
    }

    pub fn point_mass(n_states: usize, state: usize) -> Result<Self> {
        if state >= n_states {
            return Err(Error::StateOutOfRange {
                index: state,
                n_states,
            });
        }
        let mut mass = vec![Rational::zero(); n_states];
        mass[state] = Rational::one();
        Ok(Self { mass })
    }

    pub fn n_states(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self, state: usize) -> &Rational {
        &self.mass[state]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    /// States with strictly positive mass.
    pub fn support(&self) -> Event {
        let members = (0..self.mass.len())
            .filter(|&s| self.mass[s] > Rational::zero())
            .collect();
        Event {
            n_states: self.mass.len(),
            members,
        }
    }

    /// Total probability of an event.
    pub fn probability(&self, event: &Event) -> Result<Rational> {
        check_same_space(self.mass.len(), event.n_states)?;
        Ok(event.members.iter().map(|&s| &self.mass[s]).sum())
    }

    /// Bayes restriction to an event: mass proportional to this distribution
    /// on the event, zero outside, summing to 1.
    pub fn condition(&self, event: &Event) -> Result<Distribution> {
        check_same_space(self.mass.len(), event.n_states)?;
        let total = self.probability(event)?;
        if total.is_zero() {
            return Err(Error::ConditionOnNull);
        }
        let mass = (0..self.mass.len())
            .map(|s| {
                if event.contains(s) {
                    &self.mass[s] / &total
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(Distribution { mass })
    }

    /// Affine mixture `(1-c)·self + c·other`; `c` must lie in [0, 1].
    pub fn mix(&self, other: &Distribution, c: &Rational) -> Result<Distribution> {
        check_same_space(self.mass.len(), other.mass.len())?;
        if c < &Rational::zero() || c > &Rational::one() {
            return Err(Error::InvalidDistribution(format!(
                "mixture weight {c} outside [0,1]"
            )));
        }
        let keep = Rational::one() - c;
        let mass = self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| a * &keep + b * c)
            .collect();
        Ok(Distribution { mass })
    }
}

/// A partition of the state space into disjoint non-empty cells.
///
/// Stored canonically: each cell sorted ascending and cells ordered by their
/// smallest state index, so structurally equal partitions compare equal and
/// identifier assignment downstream is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n_states: usize,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    pub fn new(n_states: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::EmptyStateSpace);
        }
        let mut canonical: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for mut cell in cells {
            if cell.is_empty() {
                return Err(Error::InvalidPartition("empty cell".into()));
            }
            cell.sort_unstable();
            if cell.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidPartition(
                    "state repeated within a cell".into(),
                ));
            }
            canonical.push(cell);
        }
        canonical.sort_by_key(|cell| cell[0]);
        let mut cell_of = vec![usize::MAX; n_states];
        for (ci, cell) in canonical.iter().enumerate() {
            for &s in cell {
                if s >= n_states {
                    return Err(Error::StateOutOfRange { index: s, n_states });
                }
                if cell_of[s] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "state {s} appears in two cells"
                    )));
                }
                cell_of[s] = ci;
            }
        }
        if let Some(missing) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "state {missing} not covered by any cell"
            )));
        }
        Ok(Self {
            n_states,
            cells: canonical,
            cell_of,
        })
    }

    /// The single-cell partition (an uninformed trader).
    pub fn trivial(n_states: usize) -> Self {
        Self::new(n_states, vec![(0..n_states).collect()]).expect("trivial partition is valid")
    }

    /// The all-singletons partition (a fully informed trader).
    pub fn singletons(n_states: usize) -> Self {
        Self::new(n_states, (0..n_states).map(|s| vec![s]).collect())
            .expect("singleton partition is valid")
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, index: usize) -> &[usize] {
        &self.cells[index]
    }

    /// Index of the cell containing `state`.
    pub fn cell_index_of(&self, state: usize) -> usize {
        self.cell_of[state]
    }

    /// The cell containing `state`.
    pub fn cell_of(&self, state: usize) -> &[usize] {
        &self.cells[self.cell_of[state]]
    }

    pub fn is_singletons(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    /// True when every cell of `self` is contained in a cell of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n_states == coarser.n_states
            && self
                .cells
                .iter()
                .all(|cell| cell.iter().all(|&s| coarser.cell_of[s] == coarser.cell_of[cell[0]]))
    }
}

/// The coarsest common refinement of a non-empty sequence of partitions:
/// two states share a join cell exactly when they share a cell in every
/// input partition.
pub fn join(partitions: &[Partition]) -> Result<Partition> {
    let first = partitions.first().ok_or(Error::EmptySignalStructure)?;
    let n = first.n_states;
    for p in partitions {
        check_same_space(n, p.n_states)?;
    }
    // Group states by their vector of per-partition cell indices.
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for state in 0..n {
        let key: Vec<usize> = partitions.iter().map(|p| p.cell_of[state]).collect();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(state),
            None => groups.push((key, vec![state])),
        }
    }
    Partition::new(n, groups.into_iter().map(|(_, m)| m).collect())
}

/// One partition of the state space per trader, plus the precomputed join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalStructure {
    partitions: Vec<Partition>,
    join: Partition,
}

impl SignalStructure {
    pub fn new(partitions: Vec<Partition>) -> Result<Self> {
        let join = join(&partitions)?;
        Ok(Self { partitions, join })
    }

    pub fn n_traders(&self) -> usize {
        self.partitions.len()
    }

    pub fn n_states(&self) -> usize {
        self.join.n_states()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, trader: usize) -> &Partition {
        &self.partitions[trader]
    }

    pub fn join(&self) -> &Partition {
        &self.join
    }

    /// Trader index of a partition equal to the join, if any.
    pub fn fully_informed_trader(&self) -> Option<usize> {
        self.partitions.iter().position(|p| *p == self.join)
    }
}

/// A set of securities: one exact-rational payoff per (state, security).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecuritySet {
    names: Vec<String>,
    /// Row-per-state payoff matrix; `payoffs[state][security]`.
    payoffs: Vec<Vec<Rational>>,
}

impl SecuritySet {
    pub fn new<I, S>(names: I, payoffs: Vec<Vec<Rational>>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidSecuritySet("no securities".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidSecuritySet(format!(
                    "duplicate security name '{name}'"
                )));
            }
        }
        if payoffs.is_empty() {
            return Err(Error::InvalidSecuritySet("no states".into()));
        }
        for row in &payoffs {
            if row.len() != names.len() {
                return Err(Error::DimensionMismatch {
                    expected: names.len(),
                    got: row.len(),
                });
            }
        }
        Ok(Self { names, payoffs })
    }

    /// Event securities paying 1 inside their event and 0 outside.
    pub fn from_events<I, S>(names: I, n_states: usize, events: &[Event]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for e in events {
            check_same_space(n_states, e.n_states())?;
        }
        let payoffs = (0..n_states)
            .map(|s| {
                events
                    .iter()
                    .map(|e| {
                        if e.contains(s) {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(names, payoffs)
    }

    pub fn n_states(&self) -> usize {
        self.payoffs.len()
    }

    pub fn n_securities(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, security: usize) -> &str {
        &self.names[security]
    }

    /// Payoff vector `X(state)` across all securities.
    pub fn row(&self, state: usize) -> &[Rational] {
        &self.payoffs[state]
    }

    pub fn payoff(&self, state: usize, security: usize) -> &Rational {
        &self.payoffs[state][security]
    }

    /// Restriction to a subset of securities, preserving order.
    pub fn select(&self, securities: &[usize]) -> Result<SecuritySet> {
        let names: Vec<String> = securities
            .iter()
            .map(|&j| {
                self.names
                    .get(j)
                    .cloned()
                    .ok_or(Error::InvalidSecuritySet(format!("no security {j}")))
            })
            .collect::<Result<_>>()?;
        let payoffs = self
            .payoffs
            .iter()
            .map(|row| securities.iter().map(|&j| row[j].clone()).collect())
            .collect();
        SecuritySet::new(names, payoffs)
    }

    /// True when every payoff is 0 or 1.
    pub fn is_event_securities(&self) -> bool {
        self.payoffs
            .iter()
            .flatten()
            .all(|p| p.is_zero() || p.is_one())
    }

    /// Payoff matrix `M` with one row per state and one column per security.
    pub fn payoff_matrix(&self) -> Matrix {
        Matrix::from_rows(
            self.payoffs
                .iter()
                .map(|row| row.to_vec())
                .collect::<Vec<_>>(),
        )
    }

    /// `M'`: the payoff matrix augmented with an all-ones column, whose rank
    /// decides completeness.
    pub fn augmented_matrix(&self) -> Matrix {
        Matrix::from_rows(
            self.payoffs
                .iter()
                .map(|row| {
                    let mut r = row.to_vec();
                    r.push(rat_int(1));
                    r
                })
                .collect::<Vec<_>>(),
        )
    }
}

/// Exact expected payoff vector `E_P[X] = Σ_ω P(ω)·X(ω)`.
pub fn expectation(p: &Distribution, x: &SecuritySet) -> Result<Vec<Rational>> {
    check_same_space(p.n_states(), x.n_states())?;
    let mut out = vec![Rational::zero(); x.n_securities()];
    for state in 0..p.n_states() {
        let w = p.mass(state);
        if w.is_zero() {
            continue;
        }
        for (acc, payoff) in out.iter_mut().zip(x.row(state)) {
            *acc += w * payoff;
        }
    }
    Ok(out)
}

/// Expected payoff vector conditioned on an event: `E_P[X | S]`.
/// Errors when `P(S) = 0`.
pub fn conditional_expectation(
    p: &Distribution,
    x: &SecuritySet,
    given: &Event,
) -> Result<Vec<Rational>> {
    expectation(&p.condition(given)?, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn abcd() -> StateSpace {
        StateSpace::new(["A", "B", "C", "D"]).unwrap()
    }

    #[test]
    fn state_space_rejects_duplicates_and_empty() {
        assert_eq!(
            StateSpace::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyStateSpace
        );
        assert_eq!(
            StateSpace::new(["x", "x"]).unwrap_err(),
            Error::DuplicateState("x".into())
        );
    }

    #[test]
    fn join_matches_worked_example() {
        // {{A,D},{B,C}} joined with {{A,C,D},{B}} gives {{A,D},{B},{C}}.
        let s = abcd();
        let p1 = Partition::new(s.len(), vec![vec![0, 3], vec![1, 2]]).unwrap();
        let p2 = Partition::new(s.len(), vec![vec![0, 2, 3], vec![1]]).unwrap();
        let j = join(&[p1, p2]).unwrap();
        assert_eq!(j.cells(), &[vec![0, 3], vec![1], vec![2]]);
    }

    #[test]
    fn join_of_single_partition_is_identity() {
        let p = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(join(std::slice::from_ref(&p)).unwrap(), p);
    }

    #[test]
    fn join_of_crossing_pairs_is_singletons() {
        // Diagonal and column information pool to full knowledge.
        let p1 = Partition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap();
        let p2 = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let j = join(&[p1, p2]).unwrap();
        assert!(j.is_singletons());
        assert_eq!(j.cells(), &[vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn join_rejects_mismatched_spaces() {
        let p1 = Partition::trivial(3);
        let p2 = Partition::trivial(4);
        assert!(matches!(
            join(&[p1, p2]).unwrap_err(),
            Error::StateSpaceMismatch { .. }
        ));
    }

    #[test]
    fn join_refines_inputs_and_is_idempotent() {
        let p1 = Partition::new(5, vec![vec![0, 1, 4], vec![2, 3]]).unwrap();
        let p2 = Partition::new(5, vec![vec![0, 1], vec![2, 4], vec![3]]).unwrap();
        let j = join(&[p1.clone(), p2.clone()]).unwrap();
        assert!(j.refines(&p1));
        assert!(j.refines(&p2));
        let again = join(&[p1, p2, j.clone()]).unwrap();
        assert_eq!(again, j);
    }

    #[test]
    fn partition_rejects_overlap_and_gaps() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0], vec![2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn condition_renormalizes_on_event() {
        let p = Distribution::uniform(4);
        let e = Event::new(4, [0, 2]).unwrap();
        let c = p.condition(&e).unwrap();
        assert_eq!(
            c.masses(),
            &[rat(1, 2), rat_int(0), rat(1, 2), rat_int(0)]
        );
    }

    #[test]
    fn condition_on_whole_space_is_identity() {
        let p = Distribution::new(vec![rat(1, 2), rat(1, 4), rat(1, 4), rat_int(0)]).unwrap();
        assert_eq!(p.condition(&Event::full(4)).unwrap(), p);
    }

    #[test]
    fn condition_drops_excluded_mass() {
        let p = Distribution::new(vec![rat(1, 2), rat(1, 4), rat(1, 4), rat_int(0)]).unwrap();
        let e = Event::new(4, [1, 2, 3]).unwrap();
        let c = p.condition(&e).unwrap();
        assert_eq!(
            c.masses(),
            &[rat_int(0), rat(1, 2), rat(1, 2), rat_int(0)]
        );
    }

    #[test]
    fn condition_on_null_event_errors() {
        let p = Distribution::new(vec![rat(1, 2), rat(1, 2), rat_int(0)]).unwrap();
        let e = Event::new(3, [2]).unwrap();
        assert_eq!(p.condition(&e).unwrap_err(), Error::ConditionOnNull);
    }

    fn election_security() -> SecuritySet {
        // Pays 1 on the first two of four states.
        SecuritySet::from_events(["election"], 4, &[Event::new(4, [0, 1]).unwrap()]).unwrap()
    }

    #[test]
    fn expectation_of_point_mass_is_payoff_row() {
        let x = election_security();
        let p = Distribution::point_mass(4, 1).unwrap();
        assert_eq!(expectation(&p, &x).unwrap(), vec![rat_int(1)]);
    }

    #[test]
    fn uniform_expectation_of_election_security_is_half() {
        let x = election_security();
        let p = Distribution::uniform(4);
        assert_eq!(expectation(&p, &x).unwrap(), vec![rat(1, 2)]);
    }

    #[test]
    fn expectation_of_two_securities() {
        let x = SecuritySet::from_events(
            ["a", "b"],
            4,
            &[Event::new(4, [0, 1]).unwrap(), Event::new(4, [0, 2]).unwrap()],
        )
        .unwrap();
        let p = Distribution::new(vec![rat(1, 3), rat(1, 3), rat(1, 3), rat_int(0)]).unwrap();
        assert_eq!(expectation(&p, &x).unwrap(), vec![rat(2, 3), rat(2, 3)]);
    }

    #[test]
    fn conditional_expectation_on_half_space() {
        let x = election_security();
        let p = Distribution::uniform(4);
        let s = Event::new(4, [0, 2]).unwrap();
        assert_eq!(
            conditional_expectation(&p, &x, &s).unwrap(),
            vec![rat(1, 2)]
        );
    }

    #[test]
    fn conditional_expectation_on_singleton_is_payoff() {
        let x = election_security();
        let p = Distribution::uniform(4);
        for state in 0..4 {
            let s = Event::new(4, [state]).unwrap();
            assert_eq!(
                conditional_expectation(&p, &x, &s).unwrap(),
                x.row(state).to_vec()
            );
        }
    }

    #[test]
    fn conditional_expectation_in_six_state_market() {
        // Uniform over four of six states; the security pays on states 1 and 4;
        // conditioning on the first trader's cell {0,1,2} leaves expectation 1/2.
        let x = SecuritySet::from_events(["xstar"], 6, &[Event::new(6, [1, 4]).unwrap()]).unwrap();
        let p = Distribution::uniform_over(6, &[0, 1, 4, 5]).unwrap();
        let cell = Event::new(6, [0, 1, 2]).unwrap();
        assert_eq!(
            conditional_expectation(&p, &x, &cell).unwrap(),
            vec![rat(1, 2)]
        );
    }

    #[test]
    fn law_of_total_expectation_exact() {
        let x = SecuritySet::new(
            ["s1", "s2"],
            vec![
                vec![rat(3, 7), rat_int(2)],
                vec![rat(-1, 2), rat(5, 3)],
                vec![rat_int(4), rat(2, 9)],
                vec![rat(1, 6), rat_int(-3)],
            ],
        )
        .unwrap();
        let p = Distribution::new(vec![rat(1, 6), rat(1, 3), rat(1, 2), rat_int(0)]).unwrap();
        let partition = Partition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap();
        let full = expectation(&p, &x).unwrap();
        let mut recomposed = vec![Rational::zero(); 2];
        for cell in partition.cells() {
            let event = Event::new(4, cell.iter().copied()).unwrap();
            let weight = p.probability(&event).unwrap();
            if weight.is_zero() {
                continue;
            }
            let cond = conditional_expectation(&p, &x, &event).unwrap();
            for (acc, c) in recomposed.iter_mut().zip(cond) {
                *acc += &weight * c;
            }
        }
        assert_eq!(recomposed, full);
    }

    #[test]
    fn security_set_select_and_event_payoffs() {
        let x = SecuritySet::from_events(
            ["a", "b"],
            3,
            &[Event::new(3, [0]).unwrap(), Event::new(3, [1, 2]).unwrap()],
        )
        .unwrap();
        assert!(x.is_event_securities());
        let only_b = x.select(&[1]).unwrap();
        assert_eq!(only_b.names(), &["b".to_string()]);
        assert_eq!(only_b.row(2), &[rat_int(1)]);
    }
}
