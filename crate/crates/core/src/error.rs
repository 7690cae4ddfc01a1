//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised by model construction, simulation, certification, and design.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state space must be non-empty")]
    EmptyStateSpace,

    #[error("duplicate state label '{0}'")]
    DuplicateState(String),

    #[error("state index {index} out of range for {n_states} states")]
    StateOutOfRange { index: usize, n_states: usize },

    #[error("objects refer to different state spaces ({left} vs {right} states)")]
    StateSpaceMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid security set: {0}")]
    InvalidSecuritySet(String),

    #[error("signal structure needs at least one partition")]
    EmptySignalStructure,

    #[error("conditioning on an event of probability zero")]
    ConditionOnNull,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("scoring constant b must be positive")]
    NonPositiveScale,

    #[error("trace has no predictions to settle")]
    EmptyTrace,

    #[error("true state has zero prior probability")]
    ImpossibleTrueState,

    #[error("max_rounds must be at least 1")]
    ZeroRounds,

    #[error("trace ended at the round cap, not at a fixed point")]
    NotAFixedPoint,

    #[error("witness search budget must be at least 1")]
    ZeroBudget,

    #[error(
        "securities have too many independent payoffs for event counterexample \
         construction: no nullspace below the min(|E|,|complement|)-1 bound"
    )]
    NoNullspace,

    #[error(
        "join of the signal structure has a non-singleton cell; relabel join \
         elements as states (see design::quotient_by_join) before constructing \
         a single informative security"
    )]
    NonSingletonJoin,

    #[error("identifier base must be at least 2")]
    BadBase,

    #[error("no informative subset of the candidate securities exists")]
    Infeasible,

    #[error("greedy selection requires a fully informed trader (an all-singleton partition)")]
    NoFullyInformedTrader,

    #[error("duplicate set label '{0}' in set-cover instance")]
    DuplicateSetLabel(String),

    #[error("set-cover instance error: {0}")]
    BadSetCoverInstance(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
