//! Greedy heuristic teachers.
//!
//! Examples are scored independently and added to the teaching set in score
//! order until a stop rule fires:
//!
//! * **uniqueness** (ascending): expected L-consistency of a concept with the
//!   target-labelled example. Low values single out the target.
//! * **homogeneity** (descending): mean learner similarity to the target of the
//!   concepts that share the target's label on the example.
//! * **combined** (descending): `(1 - uniqueness) + α · homogeneity`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{good_partition, sim_l, Instance, LabelledExample, SimilarityMode, TeachingSet};
use crate::probability::{keep_probability, Evaluator};

pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeuristicScore {
    pub example: usize,
    pub uniqueness: f64,
    pub homogeneity: f64,
    pub combined: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Uniqueness,
    Homogeneity,
    Combined,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Uniqueness => "uniqueness",
            Criterion::Homogeneity => "homogeneity",
            Criterion::Combined => "combined",
        })
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniqueness" => Ok(Criterion::Uniqueness),
            "homogeneity" => Ok(Criterion::Homogeneity),
            "combined" => Ok(Criterion::Combined),
            other => Err(Error::invalid(format!("unknown criterion `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Take exactly this many examples.
    Size(usize),
    /// Stop once the success probability under the `(q, mode)` partition
    /// reaches `p`.
    Probability { p: f64, q: f64, mode: SimilarityMode },
}

#[derive(Debug, Clone)]
pub struct GreedyResult {
    pub teaching_set: TeachingSet,
    /// Examples in the order they were added.
    pub order: Vec<usize>,
    pub satisfied: bool,
    /// Success probability of the final set, when the stop rule involves one.
    pub achieved_p: Option<f64>,
}

pub fn uniqueness(instance: &Instance, x: usize) -> Result<f64> {
    instance.check_example(x)?;
    let item = LabelledExample { example: x, label: instance.target_label(x) };
    let n = instance.num_concepts();
    let total: f64 = (0..n).map(|c| keep_probability(instance, c, item)).sum();
    Ok(total / n as f64)
}

pub fn homogeneity(instance: &Instance, x: usize) -> Result<f64> {
    instance.check_example(x)?;
    let target = instance.target();
    let label = instance.target_label(x);
    // never empty: the target always shares its own label
    let survivors: Vec<usize> = (0..instance.num_concepts())
        .filter(|&c| instance.label(c, x) == label)
        .collect();
    let total = survivors
        .iter()
        .map(|&c| sim_l(instance, c, target))
        .sum::<Result<f64>>()?;
    Ok(total / survivors.len() as f64)
}

pub fn combined(uniqueness: f64, homogeneity: f64, alpha: f64) -> f64 {
    (1.0 - uniqueness) + alpha * homogeneity
}

pub fn scores(instance: &Instance, alpha: f64) -> Result<Vec<HeuristicScore>> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::invalid(format!("alpha = {alpha} must be nonnegative")));
    }
    // sim_L(c, c*) per concept, shared across examples
    let target = instance.target();
    let sims = (0..instance.num_concepts())
        .map(|c| sim_l(instance, c, target))
        .collect::<Result<Vec<_>>>()?;
    (0..instance.num_examples())
        .map(|x| {
            let u = uniqueness(instance, x)?;
            let label = instance.target_label(x);
            let (sum, count) = (0..instance.num_concepts())
                .filter(|&c| instance.label(c, x) == label)
                .fold((0.0, 0usize), |(s, n), c| (s + sims[c], n + 1));
            let h = sum / count as f64;
            Ok(HeuristicScore {
                example: x,
                uniqueness: u,
                homogeneity: h,
                combined: combined(u, h, alpha),
            })
        })
        .collect()
}

/// Examples in greedy order: ascending uniqueness, or descending homogeneity
/// or combined score; ties by ascending example index.
pub fn ranking(scores: &[HeuristicScore], criterion: Criterion) -> Vec<usize> {
    let mut ranked: Vec<&HeuristicScore> = scores.iter().collect();
    ranked.sort_by(|a, b| {
        let ord = match criterion {
            Criterion::Uniqueness => a.uniqueness.total_cmp(&b.uniqueness),
            Criterion::Homogeneity => b.homogeneity.total_cmp(&a.homogeneity),
            Criterion::Combined => b.combined.total_cmp(&a.combined),
        };
        ord.then(a.example.cmp(&b.example))
    });
    ranked.into_iter().map(|s| s.example).collect()
}

pub fn greedy_teaching_set(
    instance: &Instance,
    criterion: Criterion,
    alpha: f64,
    stop: StopRule,
) -> Result<GreedyResult> {
    let scores = scores(instance, alpha)?;
    let order = ranking(&scores, criterion);
    match stop {
        StopRule::Size(k) => {
            if k == 0 {
                return Err(Error::invalid("stop size must be at least 1"));
            }
            let satisfied = k <= order.len();
            let chosen: Vec<usize> = order.into_iter().take(k).collect();
            Ok(GreedyResult {
                teaching_set: TeachingSet::for_target(instance, &chosen)?,
                order: chosen,
                satisfied,
                achieved_p: None,
            })
        }
        StopRule::Probability { p, q, mode } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
            }
            let partition = good_partition(instance, q, mode)?;
            let mut eval = Evaluator::new(instance, &partition)?;
            let mut chosen = Vec::new();
            let mut sorted = Vec::new();
            let mut achieved = 0.0;
            for x in order {
                chosen.push(x);
                let pos = sorted.partition_point(|&y| y < x);
                sorted.insert(pos, x);
                achieved = eval.evaluate_indices(&sorted);
                if achieved >= p - crate::optimize::PROBABILITY_TOLERANCE {
                    return Ok(GreedyResult {
                        teaching_set: TeachingSet::for_target(instance, &sorted)?,
                        order: chosen,
                        satisfied: true,
                        achieved_p: Some(achieved),
                    });
                }
            }
            Ok(GreedyResult {
                teaching_set: TeachingSet::for_target(instance, &sorted)?,
                order: chosen,
                satisfied: false,
                achieved_p: Some(achieved),
            })
        }
    }
}
