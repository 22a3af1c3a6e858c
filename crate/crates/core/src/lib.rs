//! Exact-arithmetic toolkit for two-agent correlation strategies `P(x,y|a,b)`.
//!
//! The crate checks the no-signaling and posterior conditions, decides
//! membership in the local polytope with an exact simplex (returning either a
//! convex decomposition into deterministic local strategies or a separating
//! functional), evaluates CHSH functionals, and builds and samples the
//! common-randomness and one-way-communication mechanisms that generate
//! strategies.
//!
//! All probabilities are [`Rational`]s; floating point only appears in
//! reporting quantities (mutual information, empirical distances).

#![allow(clippy::needless_range_loop)]

pub mod bell;
pub mod catalog;
pub mod cli;
pub mod dist;
pub mod format;
pub mod mechanisms;
pub mod nosignaling;
pub mod polytope;
pub mod rational;
pub mod sampling;
pub mod simplex;

pub use dist::{Alphabets, DistError, JointDistribution, ObservationPrior, Side, Strategy};
pub use rational::Rational;
