//! Teaching instances, similarity measures and good/bad concept partitions.
//!
//! An [`Instance`] is a finite concept class over a finite example set: a
//! binary consistency matrix `c(x)`, a matrix of deductive error
//! probabilities `γ(c, x)` (the chance that the learner misjudges `c(x)` when
//! checking consistency), and a designated target concept.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack applied when comparing a similarity against a threshold `q`.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    examples: Vec<String>,
    concepts: Vec<String>,
    /// Row-major `n × m`.
    consistency: Vec<bool>,
    /// Row-major `n × m`.
    gamma: Vec<f64>,
    target: usize,
    example_weights: Option<Vec<f64>>,
}

impl Instance {
    /// Builds and validates an instance from per-concept rows.
    pub fn new(
        examples: Vec<String>,
        concepts: Vec<String>,
        consistency: Vec<Vec<bool>>,
        gamma: Vec<Vec<f64>>,
        target: usize,
    ) -> Result<Self> {
        let n = concepts.len();
        let m = examples.len();
        if n == 0 {
            return Err(Error::invalid("instance has no concepts"));
        }
        if m == 0 {
            return Err(Error::invalid("instance has no examples"));
        }
        check_unique(&concepts, "concept")?;
        check_unique(&examples, "example")?;
        if consistency.len() != n {
            return Err(Error::format(
                "consistency",
                format!("expected {n} rows, found {}", consistency.len()),
            ));
        }
        if gamma.len() != n {
            return Err(Error::format(
                "gamma",
                format!("expected {n} rows, found {}", gamma.len()),
            ));
        }
        let mut flat_consistency = Vec::with_capacity(n * m);
        let mut flat_gamma = Vec::with_capacity(n * m);
        for (c, (crow, grow)) in consistency.iter().zip(&gamma).enumerate() {
            if crow.len() != m {
                return Err(Error::format(
                    format!("consistency row {c} (concept `{}`)", concepts[c]),
                    format!("expected {m} columns, found {}", crow.len()),
                ));
            }
            if grow.len() != m {
                return Err(Error::format(
                    format!("gamma row {c} (concept `{}`)", concepts[c]),
                    format!("expected {m} columns, found {}", grow.len()),
                ));
            }
            for (x, &g) in grow.iter().enumerate() {
                if !(0.0..=1.0).contains(&g) {
                    return Err(Error::format(
                        format!("gamma (concept `{}`, example `{}`)", concepts[c], examples[x]),
                        format!("error probability {g} outside [0, 1]"),
                    ));
                }
            }
            flat_consistency.extend_from_slice(crow);
            flat_gamma.extend_from_slice(grow);
        }
        if target >= n {
            return Err(Error::invalid(format!(
                "target index {target} out of range for {n} concepts"
            )));
        }
        Ok(Self {
            examples,
            concepts,
            consistency: flat_consistency,
            gamma: flat_gamma,
            target,
            example_weights: None,
        })
    }

    /// Replaces the uniform example distribution used by [`sim`] and
    /// [`sim_l`] with explicit per-example weights summing to one.
    pub fn with_example_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.num_examples() {
            return Err(Error::invalid(format!(
                "expected {} example weights, found {}",
                self.num_examples(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("example weights must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("example weights sum to {total}, not 1")));
        }
        self.example_weights = Some(weights);
        Ok(self)
    }

    /// Same instance with a different target concept.
    pub fn with_target(mut self, target: usize) -> Result<Self> {
        self.check_concept(target)?;
        self.target = target;
        Ok(self)
    }

    pub fn num_examples(&self) -> usize {
        self.examples.len()
    }

    pub fn num_concepts(&self) -> usize {
        self.concepts.len()
    }

    pub fn examples(&self) -> &[String] {
        &self.examples
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn example_weights(&self) -> Option<&[f64]> {
        self.example_weights.as_deref()
    }

    /// `c(x)`.
    #[inline]
    pub fn label(&self, concept: usize, example: usize) -> bool {
        self.consistency[concept * self.examples.len() + example]
    }

    /// `γ(c, x)`.
    #[inline]
    pub fn gamma(&self, concept: usize, example: usize) -> f64 {
        self.gamma[concept * self.examples.len() + example]
    }

    pub fn consistency_row(&self, concept: usize) -> &[bool] {
        let m = self.examples.len();
        &self.consistency[concept * m..(concept + 1) * m]
    }

    pub fn gamma_row(&self, concept: usize) -> &[f64] {
        let m = self.examples.len();
        &self.gamma[concept * m..(concept + 1) * m]
    }

    /// The target's label `c*(x)`.
    #[inline]
    pub fn target_label(&self, example: usize) -> bool {
        self.label(self.target, example)
    }

    pub fn concept_index(&self, id: &str) -> Option<usize> {
        self.concepts.iter().position(|c| c == id)
    }

    pub fn example_index(&self, id: &str) -> Option<usize> {
        self.examples.iter().position(|x| x == id)
    }

    pub(crate) fn check_concept(&self, c: usize) -> Result<()> {
        if c < self.num_concepts() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "concept index {c} out of range for {} concepts",
                self.num_concepts()
            )))
        }
    }

    pub(crate) fn check_example(&self, x: usize) -> Result<()> {
        if x < self.num_examples() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "example index {x} out of range for {} examples",
                self.num_examples()
            )))
        }
    }

    #[inline]
    fn example_weight(&self, x: usize) -> f64 {
        match &self.example_weights {
            Some(w) => w[x],
            None => 1.0 / self.examples.len() as f64,
        }
    }
}

fn check_unique(ids: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if !seen.insert(id.as_str()) {
            return Err(Error::format(
                format!("{what} {i}"),
                format!("duplicate {what} id `{id}`"),
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelledExample {
    pub example: usize,
    pub label: bool,
}

/// A set of labelled examples in canonical (ascending example index) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TeachingSet {
    items: Vec<LabelledExample>,
}

impl TeachingSet {
    /// Canonicalizes arbitrary labelled examples. Duplicate examples are rejected.
    pub fn new(mut items: Vec<LabelledExample>) -> Result<Self> {
        items.sort_by_key(|it| it.example);
        if let Some(w) = items.windows(2).find(|w| w[0].example == w[1].example) {
            return Err(Error::invalid(format!(
                "example {} appears twice in teaching set",
                w[0].example
            )));
        }
        Ok(Self { items })
    }

    /// Labels the given examples by the instance's target concept.
    pub fn for_target(instance: &Instance, examples: &[usize]) -> Result<Self> {
        let items = examples
            .iter()
            .map(|&x| {
                instance.check_example(x)?;
                Ok(LabelledExample {
                    example: x,
                    label: instance.target_label(x),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(items)
    }

    /// Resolves example ids against the instance, labelling by the target.
    pub fn from_ids<S: AsRef<str>>(instance: &Instance, ids: &[S]) -> Result<Self> {
        let indices = ids
            .iter()
            .map(|id| {
                let id = id.as_ref();
                instance
                    .example_index(id)
                    .ok_or_else(|| Error::invalid(format!("unknown example id `{id}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::for_target(instance, &indices)
    }

    pub fn items(&self) -> &[LabelledExample] {
        &self.items
    }

    pub fn example_indices(&self) -> Vec<usize> {
        self.items.iter().map(|it| it.example).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub(crate) fn check_against(&self, instance: &Instance) -> Result<()> {
        if self.is_empty() {
            return Err(Error::invalid("teaching set is empty"));
        }
        match self.items.last() {
            Some(last) => instance.check_example(last.example),
            None => Ok(()),
        }
    }
}

/// Whether "good" is judged by plain label agreement (identification) or by
/// the learner's expected L-consistency with the target (employment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityMode {
    #[serde(rename = "id")]
    Identification,
    #[serde(rename = "em")]
    Employment,
}

impl SimilarityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityMode::Identification => "id",
            SimilarityMode::Employment => "em",
        }
    }
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "id" | "identification" => Ok(SimilarityMode::Identification),
            "em" | "employment" => Ok(SimilarityMode::Employment),
            other => Err(Error::invalid(format!("unknown similarity mode `{other}`"))),
        }
    }
}

/// Plain similarity: the (weighted) fraction of examples on which `c` and
/// `other` agree.
pub fn sim(instance: &Instance, c: usize, other: usize) -> Result<f64> {
    instance.check_concept(c)?;
    instance.check_concept(other)?;
    let total = (0..instance.num_examples())
        .filter(|&x| instance.label(c, x) == instance.label(other, x))
        .map(|x| instance.example_weight(x))
        .sum();
    Ok(total)
}

/// Learner similarity: the expected rate at which the learner judges `c`
/// consistent with examples labelled by `reference`. Uses the error row of `c`,
/// so it is not symmetric.
pub fn sim_l(instance: &Instance, c: usize, reference: usize) -> Result<f64> {
    instance.check_concept(c)?;
    instance.check_concept(reference)?;
    let total = (0..instance.num_examples())
        .map(|x| {
            let g = instance.gamma(c, x);
            let p = if instance.label(c, x) == instance.label(reference, x) {
                1.0 - g
            } else {
                g
            };
            p * instance.example_weight(x)
        })
        .sum();
    Ok(total)
}

pub fn similarity(instance: &Instance, c: usize, reference: usize, mode: SimilarityMode) -> Result<f64> {
    match mode {
        SimilarityMode::Identification => sim(instance, c, reference),
        SimilarityMode::Employment => sim_l(instance, c, reference),
    }
}

/// Concepts split by whether they are `q`-similar to the target.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodPartition {
    pub mode: SimilarityMode,
    pub q: f64,
    is_good: Vec<bool>,
}

impl GoodPartition {
    /// Builds a partition from an explicit membership mask.
    pub fn from_mask(is_good: Vec<bool>, mode: SimilarityMode, q: f64) -> Self {
        Self { mode, q, is_good }
    }

    pub fn is_good(&self, c: usize) -> bool {
        self.is_good[c]
    }

    pub fn mask(&self) -> &[bool] {
        &self.is_good
    }

    pub fn num_concepts(&self) -> usize {
        self.is_good.len()
    }

    pub fn good(&self) -> Vec<usize> {
        (0..self.is_good.len()).filter(|&c| self.is_good[c]).collect()
    }

    pub fn bad(&self) -> Vec<usize> {
        (0..self.is_good.len()).filter(|&c| !self.is_good[c]).collect()
    }
}

/// Partitions concepts into those at least `q`-similar to the target and the
/// rest. The target is classified by the same rule as every other concept.
pub fn good_partition(instance: &Instance, q: f64, mode: SimilarityMode) -> Result<GoodPartition> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("q = {q} outside [0, 1]")));
    }
    let target = instance.target();
    let is_good = (0..instance.num_concepts())
        .map(|c| Ok(similarity(instance, c, target, mode)? >= q - THRESHOLD_TOLERANCE))
        .collect::<Result<Vec<_>>>()?;
    Ok(GoodPartition { mode, q, is_good })
}

/// Full `n × n` similarity matrix; entry `[a][b]` is the similarity of `a`
/// with respect to reference `b`.
pub fn similarity_matrix(instance: &Instance, mode: SimilarityMode) -> Vec<Vec<f64>> {
    let n = instance.num_concepts();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| similarity(instance, a, b, mode).expect("indices in range"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Two concepts disagreeing on both examples, target `c2`.
    pub(crate) fn worked_example() -> Instance {
        Instance::new(
            vec!["x1".into(), "x2".into()],
            vec!["c1".into(), "c2".into()],
            vec![vec![true, false], vec![false, true]],
            vec![vec![0.1, 0.2], vec![0.1, 0.2]],
            1,
        )
        .unwrap()
    }

    #[test]
    fn sim_identity_and_disagreement() {
        let inst = worked_example();
        assert_eq!(sim(&inst, 0, 0).unwrap(), 1.0);
        assert_eq!(sim(&inst, 1, 1).unwrap(), 1.0);
        assert_eq!(sim(&inst, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn sim_partial_agreement() {
        let inst = Instance::new(
            (0..4).map(|i| format!("x{i}")).collect(),
            vec!["a".into(), "b".into()],
            vec![vec![true, true, false, false], vec![true, true, false, true]],
            vec![vec![0.0; 4], vec![0.0; 4]],
            1,
        )
        .unwrap();
        assert_eq!(sim(&inst, 0, 1).unwrap(), 0.75);
        assert_eq!(sim(&inst, 1, 0).unwrap(), 0.75);
    }

    #[test]
    fn sim_l_worked_values() {
        let inst = worked_example();
        assert!((sim_l(&inst, 1, 1).unwrap() - 0.85).abs() < 1e-12);
        assert!((sim_l(&inst, 0, 1).unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn sim_l_zero_error_matches_sim() {
        let inst = Instance::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            vec!["a".into(), "b".into()],
            vec![vec![true, false, true], vec![true, true, false]],
            vec![vec![0.0; 3], vec![0.0; 3]],
            0,
        )
        .unwrap();
        for c in 0..2 {
            assert_eq!(sim_l(&inst, c, 0).unwrap(), sim(&inst, c, 0).unwrap());
        }
    }

    #[test]
    fn index_out_of_range() {
        let inst = worked_example();
        assert!(matches!(sim(&inst, 2, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(sim_l(&inst, 0, 5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn partition_examples() {
        let inst = worked_example();
        let p = good_partition(&inst, 0.0, SimilarityMode::Identification).unwrap();
        assert_eq!(p.good(), vec![0, 1]);
        assert!(p.bad().is_empty());

        let p = good_partition(&inst, 1.0, SimilarityMode::Identification).unwrap();
        assert_eq!(p.good(), vec![1]);
        assert_eq!(p.bad(), vec![0]);

        // under employment the target itself can fall out of the good set
        let p = good_partition(&inst, 0.9, SimilarityMode::Employment).unwrap();
        assert!(p.good().is_empty());
        assert_eq!(p.bad(), vec![0, 1]);
    }

    #[test]
    fn partition_rejects_bad_q() {
        let inst = worked_example();
        assert!(good_partition(&inst, 1.5, SimilarityMode::Identification).is_err());
        assert!(good_partition(&inst, -0.1, SimilarityMode::Employment).is_err());
    }

    #[test]
    fn construction_validates() {
        let bad_gamma = Instance::new(
            vec!["x".into()],
            vec!["c".into()],
            vec![vec![true]],
            vec![vec![1.5]],
            0,
        );
        assert!(matches!(bad_gamma, Err(Error::Format { .. })));
        let dup = Instance::new(
            vec!["x".into(), "x".into()],
            vec!["c".into()],
            vec![vec![true, false]],
            vec![vec![0.0, 0.0]],
            0,
        );
        assert!(dup.is_err());
        let target = Instance::new(vec!["x".into()], vec!["c".into()], vec![vec![true]], vec![vec![0.0]], 1);
        assert!(target.is_err());
    }

    #[test]
    fn teaching_set_canonical() {
        let inst = worked_example();
        let s = TeachingSet::for_target(&inst, &[1, 0]).unwrap();
        assert_eq!(s.example_indices(), vec![0, 1]);
        assert!(!s.items()[0].label);
        assert!(s.items()[1].label);
        assert!(TeachingSet::for_target(&inst, &[0, 0]).is_err());
        assert!(TeachingSet::for_target(&inst, &[2]).is_err());
    }

    #[test]
    fn weighted_similarity() {
        let inst = worked_example().with_example_weights(vec![0.25, 0.75]).unwrap();
        assert!((sim_l(&inst, 1, 1).unwrap() - (0.25 * 0.9 + 0.75 * 0.8)).abs() < 1e-12);
        assert!(worked_example().with_example_weights(vec![0.5, 0.6]).is_err());
    }
}
