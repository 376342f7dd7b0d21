//! Verification toolkit for the basic Leggett inequalities
//! `1 - |Ā - B̄| ≥ E ≥ -1 + |Ā + B̄|` on pairs of ±1-valued observables.
//!
//! The core types are generic over a [`Probability`] scalar: exact rationals
//! check every identity with zero tolerance, floats carry the input from the
//! Born-rule and hidden-variable generators. Marginals and correlator taken
//! from one distribution always satisfy the bounds; [`hv::mixed_triple`]
//! shows how taking them from different distributions can break them.

pub mod cli;
pub mod derivation;
pub mod distribution;
pub mod error;
pub mod hv;
pub mod inequality;
pub mod montecarlo;
pub mod outcome;
pub mod quantum;
pub mod rng;
pub mod scalar;
pub mod simplex;

pub use num_rational::BigRational;

pub use derivation::{derivation_trace, DerivationTrace, StepLabel, TraceStep};
pub use distribution::{validate_distribution, JointDistribution};
pub use error::{Error, Result};
pub use inequality::{
    check_distribution, check_summary, leggett_bounds, pointwise_identity, summarize, CorrelatorSummary,
    InequalityReport, Provenance, SlackWitness,
};
pub use outcome::{Cell, Kind, Outcome, Setting, SettingPair};
pub use scalar::Probability;

pub type ExactDistribution = JointDistribution<BigRational>;
pub type FloatDistribution = JointDistribution<f64>;
pub type ExactSummary = CorrelatorSummary<BigRational>;
pub type FloatSummary = CorrelatorSummary<f64>;
pub type ExactReport = InequalityReport<BigRational>;
pub type FloatReport = InequalityReport<f64>;
pub type ExactTrace = DerivationTrace<BigRational>;
pub type FloatTrace = DerivationTrace<f64>;
