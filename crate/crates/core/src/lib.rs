//! Exact-arithmetic toolkit for designing and verifying informative
//! prediction-market securities.
//!
//! A market's securities are *informative* on a set of events when the
//! traders' myopic price dynamics always pool their private signals
//! (separability) and the final prices pin down the event likelihoods
//! (distinguishability). This crate models the whole pipeline:
//!
//! - [`model`]: states, events, exact distributions, partitions and joins,
//!   securities, and expectations.
//! - [`scoring`]: the Brier market scoring rule and payment settlement.
//! - [`dynamics`]: the myopic trading loop with common-knowledge refinement
//!   of the public possibility set.
//! - [`certify`]: exact completeness and distinguishability decisions, plus
//!   sound three-valued separability verdicts (witness / certificate /
//!   unknown).
//! - [`design`]: complete markets, single informative securities, lower
//!   bounds with adversarial counterexamples, minimum event-security
//!   selection, and the set-cover correspondence.
//!
//! Everything is exact rational arithmetic; no verdict depends on floating
//! point.

pub mod certify;
pub mod design;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod rational;
pub mod sampling;
pub mod scoring;
pub mod simplex;

pub use error::{Error, Result};
pub use rational::Rational;
