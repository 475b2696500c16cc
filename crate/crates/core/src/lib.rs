//! PAC teaching for learners with fallible consistency checks.
//!
//! Given a concept/example consistency matrix, per-cell error probabilities
//! and a target concept, this crate computes the exact probability that a
//! prudent (count-maximizing) learner ends up with a concept similar to the
//! target, finds optimal teaching sets by exhaustive search, builds heuristic
//! teaching sets greedily, and simulates learners as an empirical check.

pub mod error;
pub mod generators;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod learner;
pub mod optimize;
pub mod probability;

pub use error::{Error, Result};
pub use instance::{
    good_partition, sim, sim_l, similarity, GoodPartition, Instance, LabelledExample, SimilarityMode, TeachingSet,
};
pub use optimize::{
    approx_optimize, brute_force_success, enumerate_subsets, probable_optimize, size_optimize, Budget, Objective,
    SolveOptions, SolveResult,
};
pub use probability::{count_pmf, keep_probability, success_probability, CountDistribution};
