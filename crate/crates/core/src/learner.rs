//! Monte-Carlo simulation of learners whose consistency checks are noisy.
//!
//! Randomness comes from ChaCha8. A simulation with master seed `s` runs trial
//! `t` on `ChaCha8Rng::seed_from_u64(s)` with stream `t`, so trials are
//! independent of scheduling. Within a trial, consistency draws are consumed
//! concept-major, item-minor; a tie-break or guess draw, if any, follows.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{GoodPartition, Instance, LabelledExample, TeachingSet};
use crate::probability::keep_probability;

pub type LearnerRng = ChaCha8Rng;

/// Generator for trial `trial` of a simulation seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> LearnerRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TieRule {
    /// Any bad concept among the top scorers counts as failure.
    Worst,
    /// Guess uniformly among the top scorers.
    Uniform,
}

impl FromStr for TieRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "worst" | "worst-case" => Ok(TieRule::Worst),
            "uniform" => Ok(TieRule::Uniform),
            other => Err(Error::invalid(format!("unknown tie rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Naive,
    Prudent,
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LearnerKind::Naive => "naive",
            LearnerKind::Prudent => "prudent",
        })
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(LearnerKind::Naive),
            "prudent" => Ok(LearnerKind::Prudent),
            other => Err(Error::invalid(format!("unknown learner `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnerOutcome {
    pub guessed_concept: Option<usize>,
    /// Number of items each concept was judged consistent with.
    pub counts: Vec<usize>,
    /// Naive learner only: every concept was discarded.
    pub failed: bool,
    pub was_good: bool,
}

/// One noisy consistency check; consumes exactly one draw.
pub fn sample_l_consistency<R: Rng + ?Sized>(instance: &Instance, c: usize, item: LabelledExample, rng: &mut R) -> bool {
    rng.random::<f64>() < keep_probability(instance, c, item)
}

fn sample_table<R: Rng + ?Sized>(instance: &Instance, set: &TeachingSet, rng: &mut R) -> Vec<Vec<bool>> {
    (0..instance.num_concepts())
        .map(|c| {
            set.items()
                .iter()
                .map(|&it| sample_l_consistency(instance, c, it, rng))
                .collect()
        })
        .collect()
}

/// The prudent learner keeps every concept and guesses one with the highest
/// consistency count.
pub fn run_prudent<R: Rng + ?Sized>(
    instance: &Instance,
    set: &TeachingSet,
    partition: &GoodPartition,
    rng: &mut R,
    tie: TieRule,
) -> Result<LearnerOutcome> {
    set.check_against(instance)?;
    check_partition(instance, partition)?;
    let counts: Vec<usize> = sample_table(instance, set, rng)
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    let top: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] == max).collect();
    let (guess, was_good) = match tie {
        TieRule::Worst => {
            let bad = top.iter().copied().find(|&c| !partition.is_good(c));
            let guess = bad.unwrap_or(top[0]);
            (guess, bad.is_none() && max >= 1)
        }
        TieRule::Uniform => {
            let guess = top[rng.random_range(0..top.len())];
            (guess, partition.is_good(guess))
        }
    };
    Ok(LearnerOutcome {
        guessed_concept: Some(guess),
        counts,
        failed: false,
        was_good,
    })
}

/// The naive learner discards every concept judged inconsistent with any item
/// and guesses uniformly among the survivors.
pub fn run_naive<R: Rng + ?Sized>(
    instance: &Instance,
    set: &TeachingSet,
    partition: &GoodPartition,
    rng: &mut R,
) -> Result<LearnerOutcome> {
    set.check_against(instance)?;
    check_partition(instance, partition)?;
    let table = sample_table(instance, set, rng);
    let counts: Vec<usize> = table.iter().map(|row| row.iter().filter(|&&b| b).count()).collect();
    let survivors: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] == set.len()).collect();
    if survivors.is_empty() {
        return Ok(LearnerOutcome {
            guessed_concept: None,
            counts,
            failed: true,
            was_good: false,
        });
    }
    let guess = survivors[rng.random_range(0..survivors.len())];
    Ok(LearnerOutcome {
        guessed_concept: Some(guess),
        counts,
        failed: false,
        was_good: partition.is_good(guess),
    })
}

fn check_partition(instance: &Instance, partition: &GoodPartition) -> Result<()> {
    if partition.num_concepts() != instance.num_concepts() {
        return Err(Error::invalid("partition does not match instance"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub successes: u64,
    pub trials: u64,
}

impl McEstimate {
    fn from_counts(successes: u64, trials: u64) -> Self {
        let p = successes as f64 / trials as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            successes,
            trials,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimulationConfig {
    pub learner: LearnerKind,
    pub tie: TieRule,
    pub trials: u64,
    pub seed: u64,
}

/// Success rate of the worst-case prudent learner.
pub fn monte_carlo_success(
    instance: &Instance,
    set: &TeachingSet,
    partition: &GoodPartition,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    simulate(
        instance,
        set,
        partition,
        &SimulationConfig {
            learner: LearnerKind::Prudent,
            tie: TieRule::Worst,
            trials,
            seed,
        },
    )
}

pub fn simulate(
    instance: &Instance,
    set: &TeachingSet,
    partition: &GoodPartition,
    config: &SimulationConfig,
) -> Result<McEstimate> {
    if config.trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    set.check_against(instance)?;
    check_partition(instance, partition)?;
    let successes = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t);
            let outcome = match config.learner {
                LearnerKind::Prudent => run_prudent(instance, set, partition, &mut rng, config.tie),
                LearnerKind::Naive => run_naive(instance, set, partition, &mut rng),
            }
            .expect("inputs validated above");
            u64::from(outcome.was_good)
        })
        .sum();
    Ok(McEstimate::from_counts(successes, config.trials))
}
