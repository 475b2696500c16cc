//! Exact probability that the prudent learner ends up with a good concept.
//!
//! Each concept's L-consistency count over a teaching set is a sum of
//! independent Bernoulli trials, so its law is Poisson-binomial and is
//! computed by an `O(k²)` dynamic program. The learner succeeds when the best
//! good concept strictly outscores every bad concept and scores at least once.

use crate::error::{Error, Result};
use crate::instance::{GoodPartition, Instance, LabelledExample, TeachingSet};

/// Probability that `c` is judged consistent with `item`.
#[inline]
pub fn keep_probability(instance: &Instance, c: usize, item: LabelledExample) -> f64 {
    let g = instance.gamma(c, item.example);
    if instance.label(c, item.example) == item.label {
        1.0 - g
    } else {
        g
    }
}

/// PMF of a concept's L-consistency count; index `j` holds `P[count = j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    pmf: Vec<f64>,
}

impl CountDistribution {
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn into_pmf(self) -> Vec<f64> {
        self.pmf
    }

    /// `P[count ≤ j]` for every `j`.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }
}

pub fn count_pmf(instance: &Instance, c: usize, set: &TeachingSet) -> Result<CountDistribution> {
    instance.check_concept(c)?;
    set.check_against(instance)?;
    let mut pmf = vec![0.0; set.len() + 1];
    poisson_binomial_into(
        set.items().iter().map(|&it| keep_probability(instance, c, it)),
        &mut pmf,
    );
    Ok(CountDistribution { pmf })
}

/// Fills `out` (length `k + 1`) with the Poisson-binomial PMF of the given
/// success probabilities. Row `i` of the table is folded into `out` in place,
/// highest count first.
pub(crate) fn poisson_binomial_into(keeps: impl Iterator<Item = f64>, out: &mut [f64]) {
    out.fill(0.0);
    let mut keeps = keeps;
    let Some(first) = keeps.next() else {
        out[0] = 1.0;
        return;
    };
    out[0] = 1.0 - first;
    out[1] = first;
    for (i, keep) in keeps.enumerate() {
        let row = i + 1;
        for j in (1..=row + 1).rev() {
            out[j] = out[j - 1] * keep + out[j] * (1.0 - keep);
        }
        out[0] *= 1.0 - keep;
    }
}

/// Probability that the prudent learner's worst-case guess is good.
pub fn success_probability(instance: &Instance, set: &TeachingSet, partition: &GoodPartition) -> Result<f64> {
    set.check_against(instance)?;
    let mut eval = Evaluator::new(instance, partition)?;
    Ok(eval.evaluate_items(set.items()))
}

/// Reusable scratch space for evaluating many teaching sets against one
/// partition.
pub struct Evaluator<'a> {
    instance: &'a Instance,
    partition: &'a GoodPartition,
    cdfs: Vec<f64>,
    max_good: Vec<f64>,
    max_bad: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance, partition: &'a GoodPartition) -> Result<Self> {
        if partition.num_concepts() != instance.num_concepts() {
            return Err(Error::invalid(format!(
                "partition covers {} concepts but the instance has {}",
                partition.num_concepts(),
                instance.num_concepts()
            )));
        }
        Ok(Self {
            instance,
            partition,
            cdfs: Vec::new(),
            max_good: Vec::new(),
            max_bad: Vec::new(),
        })
    }

    /// Evaluates the target-labelled teaching set given by ascending,
    /// distinct, in-range example indices.
    pub fn evaluate_indices(&mut self, examples: &[usize]) -> f64 {
        let inst = self.instance;
        let target = inst.target();
        self.run(examples.len(), |c, i| {
            let x = examples[i];
            keep_probability(inst, c, LabelledExample { example: x, label: inst.label(target, x) })
        })
    }

    pub fn evaluate_items(&mut self, items: &[LabelledExample]) -> f64 {
        let inst = self.instance;
        self.run(items.len(), |c, i| keep_probability(inst, c, items[i]))
    }

    fn run(&mut self, k: usize, keep: impl Fn(usize, usize) -> f64) -> f64 {
        debug_assert!(k > 0);
        let n = self.instance.num_concepts();
        let width = k + 1;
        self.cdfs.resize(n * width, 0.0);

        // per-concept PMF, turned into a CDF in place
        for c in 0..n {
            let row = &mut self.cdfs[c * width..(c + 1) * width];
            poisson_binomial_into((0..k).map(|i| keep(c, i)), row);
            for i in 1..width {
                row[i] += row[i - 1];
            }
        }

        // P[max over group ≤ i] as a product of member CDFs
        self.max_good.clear();
        self.max_good.resize(width, 1.0);
        self.max_bad.clear();
        self.max_bad.resize(width, 1.0);
        for c in 0..n {
            let row = &self.cdfs[c * width..(c + 1) * width];
            let group = if self.partition.is_good(c) {
                &mut self.max_good
            } else {
                &mut self.max_bad
            };
            for (g, r) in group.iter_mut().zip(row) {
                *g *= r;
            }
        }

        // Σ_{i≥1} P[max_good = i] · P[max_bad ≤ i − 1]
        let mut probability = 0.0;
        for i in 1..width {
            let good_eq = self.max_good[i] - self.max_good[i - 1];
            probability += good_eq * self.max_bad[i - 1];
        }
        // CDF accumulation can overshoot 1 by an ulp or two
        probability.clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::worked_example;
    use crate::instance::{good_partition, SimilarityMode};

    fn enumerate_pmf(keeps: &[f64]) -> Vec<f64> {
        let k = keeps.len();
        let mut pmf = vec![0.0; k + 1];
        for mask in 0u32..(1 << k) {
            let mut w = 1.0;
            for (i, p) in keeps.iter().enumerate() {
                w *= if mask >> i & 1 == 1 { *p } else { 1.0 - p };
            }
            pmf[mask.count_ones() as usize] += w;
        }
        pmf
    }

    #[test]
    fn keep_probability_branches() {
        let inst = worked_example();
        let zero = crate::instance::Instance::new(
            vec!["x".into()],
            vec!["c".into()],
            vec![vec![true]],
            vec![vec![0.0]],
            0,
        )
        .unwrap();
        assert_eq!(keep_probability(&zero, 0, LabelledExample { example: 0, label: true }), 1.0);
        assert_eq!(keep_probability(&inst, 0, LabelledExample { example: 1, label: true }), 0.2);
        assert_eq!(keep_probability(&inst, 1, LabelledExample { example: 0, label: false }), 0.9);
    }

    #[test]
    fn pmf_worked_example() {
        let inst = worked_example();
        let s = TeachingSet::for_target(&inst, &[0, 1]).unwrap();
        let pmf = count_pmf(&inst, 1, &s).unwrap();
        let expected = [0.02, 0.26, 0.72];
        for (a, b) in pmf.pmf().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn pmf_single_bernoulli() {
        let mut out = [0.0; 2];
        poisson_binomial_into([0.8].into_iter(), &mut out);
        assert!((out[0] - 0.2).abs() < 1e-15);
        assert_eq!(out[1], 0.8);
    }

    #[test]
    fn pmf_matches_polynomial_expansion() {
        let keeps = [0.3, 0.65, 0.9];
        let mut out = [0.0; 4];
        poisson_binomial_into(keeps.iter().copied(), &mut out);
        let brute = enumerate_pmf(&keeps);
        for (a, b) in out.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pmf_rejects_empty_set() {
        let inst = worked_example();
        let empty = TeachingSet::default();
        assert!(matches!(count_pmf(&inst, 0, &empty), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn success_worked_example() {
        let inst = worked_example();
        let part = good_partition(&inst, 1.0, SimilarityMode::Identification).unwrap();
        let cases: [(&[usize], f64); 3] = [(&[1], 0.64), (&[0], 0.81), (&[0, 1], 0.8928)];
        for (idx, expected) in cases {
            let s = TeachingSet::for_target(&inst, idx).unwrap();
            let p = success_probability(&inst, &s, &part).unwrap();
            assert!((p - expected).abs() < 1e-12, "{idx:?}: {p}");
        }
    }

    #[test]
    fn empty_groups() {
        let inst = worked_example();
        let s = TeachingSet::for_target(&inst, &[0]).unwrap();
        let none_good = GoodPartition::from_mask(vec![false, false], SimilarityMode::Identification, 1.0);
        assert_eq!(success_probability(&inst, &s, &none_good).unwrap(), 0.0);
        // everyone good: success iff some concept scores at least once
        let all_good = GoodPartition::from_mask(vec![true, true], SimilarityMode::Identification, 0.0);
        let p = success_probability(&inst, &s, &all_good).unwrap();
        assert!((p - (1.0 - 0.1 * 0.9)).abs() < 1e-12);
    }

    #[test]
    fn partition_mismatch() {
        let inst = worked_example();
        let s = TeachingSet::for_target(&inst, &[0]).unwrap();
        let part = GoodPartition::from_mask(vec![true], SimilarityMode::Identification, 1.0);
        assert!(success_probability(&inst, &s, &part).is_err());
    }
}
