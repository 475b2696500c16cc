//! Prudent-optimal teachers: exhaustive search over teaching sets of bounded
//! size, with the exact success probability as the objective.
//!
//! Three objectives, each for identification or employment similarity:
//!
//! * **probable**: given `q` and `k`, maximize the success probability `p`.
//! * **approx**: given `p` and `k`, maximize `q` (binary search over a
//!   `d`-digit grid, or over the distinct similarity values).
//! * **size**: given `q` and `p`, minimize `|S|`.
//!
//! Subsets are visited in size-then-lexicographic order. Work within one size
//! level is split across threads by the subset's first element; results are
//! reduced in enumeration order, so parallel and serial runs agree.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{good_partition, similarity, GoodPartition, Instance, SimilarityMode, TeachingSet};
use crate::probability::{keep_probability, Evaluator};

/// Two success probabilities closer than this are a tie.
pub const TIE_RESOLUTION: f64 = 1e-12;

/// A set meets a target `p` when its success probability is at least
/// `p - PROBABILITY_TOLERANCE`.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Probable,
    Approx,
    Size,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Probable => "probable",
            Objective::Approx => "approx",
            Objective::Size => "size",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "probable" => Ok(Objective::Probable),
            "approx" => Ok(Objective::Approx),
            "size" => Ok(Objective::Size),
            other => Err(Error::invalid(format!("unknown objective `{other}`"))),
        }
    }
}

/// Caps on the work a single solve may do. Both are soft: the search stops at
/// the next check after a cap is reached and reports what it has.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_subsets: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub budget: Budget,
    /// For the approx objective: search the distinct similarity values
    /// instead of the decimal grid.
    pub exact_q: bool,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub teaching_set: TeachingSet,
    pub achieved_p: f64,
    pub achieved_q: f64,
    pub size: usize,
    pub mode: SimilarityMode,
    pub objective: Objective,
    pub subsets_evaluated: u64,
    /// False when no candidate met the requested target.
    pub feasible: bool,
    pub budget_exhausted: bool,
    pub elapsed: Duration,
    /// Partition at `achieved_q`.
    pub partition: GoodPartition,
}

/// Every nonempty subset of `0..m` with at most `k_max` elements, smaller
/// sizes first, lexicographic within a size. `k_max` is clamped to `m`.
pub fn enumerate_subsets(m: usize, k_max: usize) -> Result<Subsets> {
    if k_max == 0 {
        return Err(Error::invalid("subset size bound must be positive"));
    }
    Ok(Subsets {
        m,
        k_max: k_max.min(m),
        current: Vec::new(),
    })
}

#[derive(Debug, Clone)]
pub struct Subsets {
    m: usize,
    k_max: usize,
    current: Vec<usize>,
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.current.is_empty() {
            if self.m == 0 || self.k_max == 0 {
                return None;
            }
            self.current.push(0);
            return Some(self.current.clone());
        }
        if !next_combination(&mut self.current, 0, self.m) {
            let size = self.current.len() + 1;
            if size > self.k_max {
                self.current.clear();
                self.k_max = 0;
                return None;
            }
            self.current = (0..size).collect();
        }
        Some(self.current.clone())
    }
}

/// Advances `idx` to the next combination of `0..m` in lexicographic order,
/// leaving positions before `fixed` untouched.
fn next_combination(idx: &mut [usize], fixed: usize, m: usize) -> bool {
    let size = idx.len();
    let mut i = size;
    while i > fixed {
        i -= 1;
        if idx[i] < m - (size - i) {
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}

/// Zero-based position of `subset` among the `|subset|`-subsets of `0..m` in
/// lexicographic order.
fn lex_rank(subset: &[usize], m: usize) -> u64 {
    let size = subset.len();
    let mut rank = 0u64;
    let mut prev: Option<usize> = None;
    for (i, &v) in subset.iter().enumerate() {
        let start = prev.map_or(0, |p| p + 1);
        for u in start..v {
            rank += binomial(m - 1 - u, size - 1 - i);
        }
        prev = Some(v);
    }
    rank
}

fn score_key(p: f64) -> i64 {
    (p / TIE_RESOLUTION).round() as i64
}

/// Probability of success by summing over every joint outcome of the
/// learner's consistency checks. Exponential; intended as a reference.
pub fn brute_force_success(instance: &Instance, set: &TeachingSet, partition: &GoodPartition) -> Result<f64> {
    set.check_against(instance)?;
    let n = instance.num_concepts();
    if partition.num_concepts() != n {
        return Err(Error::invalid("partition does not match instance"));
    }
    let k = set.len();
    let cells = n * k;
    if cells > BRUTE_FORCE_LIMIT {
        return Err(Error::invalid(format!(
            "brute force over {n} concepts × {k} examples exceeds {BRUTE_FORCE_LIMIT} outcome bits"
        )));
    }
    let keeps: Vec<f64> = (0..n)
        .flat_map(|c| set.items().iter().map(move |&it| (c, it)))
        .map(|(c, it)| keep_probability(instance, c, it))
        .collect();

    let mut total = 0.0;
    for outcome in 0u32..(1u32 << cells) {
        let mut weight = 1.0;
        for (bit, p) in keeps.iter().enumerate() {
            weight *= if outcome >> bit & 1 == 1 { *p } else { 1.0 - p };
        }
        let mut best_good: Option<u32> = None;
        let mut best_bad: Option<u32> = None;
        for c in 0..n {
            let count = (outcome >> (c * k) & ((1u32 << k) - 1)).count_ones();
            let slot = if partition.is_good(c) { &mut best_good } else { &mut best_bad };
            *slot = Some(slot.map_or(count, |b| b.max(count)));
        }
        if let Some(g) = best_good {
            if g >= 1 && best_bad.is_none_or(|b| g > b) {
                total += weight;
            }
        }
    }
    Ok(total)
}

pub fn probable_optimize(instance: &Instance, q: f64, k: usize, mode: SimilarityMode) -> Result<SolveResult> {
    probable_optimize_with(instance, q, k, mode, &SolveOptions::default())
}

/// Teaching set of size at most `k` with the highest success probability
/// under the `q`-partition. Ties go to the smaller set, then the
/// lexicographically first.
pub fn probable_optimize_with(
    instance: &Instance,
    q: f64,
    k: usize,
    mode: SimilarityMode,
    options: &SolveOptions,
) -> Result<SolveResult> {
    if k == 0 {
        return Err(Error::invalid("size bound k must be at least 1"));
    }
    let partition = good_partition(instance, q, mode)?;
    let search = Search::new(instance, options);
    let found = search.run(|| search.best_up_to(&partition, k))?;
    let (subset, p) = found.unwrap_or_else(|| (vec![0], 0.0));
    search.finish(subset, p, q, mode, Objective::Probable, true, partition)
}

pub fn approx_optimize(instance: &Instance, p: f64, k: usize, digits: u32, mode: SimilarityMode) -> Result<SolveResult> {
    approx_optimize_with(instance, p, k, digits, mode, &SolveOptions::default())
}

/// Largest `q` for which some set of size at most `k` succeeds with
/// probability at least `p`. Feasibility is monotone in `q` (raising `q` only
/// moves concepts from good to bad), so the candidates are binary searched.
pub fn approx_optimize_with(
    instance: &Instance,
    p: f64,
    k: usize,
    digits: u32,
    mode: SimilarityMode,
    options: &SolveOptions,
) -> Result<SolveResult> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("p = {p} outside (0, 1]")));
    }
    if k == 0 {
        return Err(Error::invalid("size bound k must be at least 1"));
    }
    if !(1..=12).contains(&digits) {
        return Err(Error::invalid(format!("precision {digits} outside 1..=12 digits")));
    }
    let candidates: Vec<f64> = if options.exact_q {
        let target = instance.target();
        let mut values = (0..instance.num_concepts())
            .map(|c| similarity(instance, c, target, mode))
            .collect::<Result<Vec<_>>>()?;
        values.sort_by(f64::total_cmp);
        values.dedup();
        values
    } else {
        let steps = 10u64.pow(digits);
        (0..=steps).map(|t| t as f64 / steps as f64).collect()
    };

    let search = Search::new(instance, options);
    let mut partitions: HashMap<u64, GoodPartition> = HashMap::new();
    let mut best: Option<(usize, Vec<usize>, f64)> = None;

    search.run(|| -> Result<()> {
        // invariant: candidates[..=lo] contains a known-feasible value (or
        // lo = None); candidates[hi..] are known infeasible
        let mut lo: Option<usize> = None;
        let mut hi = candidates.len();
        while hi - lo.map_or(0, |l| l + 1) > 0 {
            let base = lo.map_or(0, |l| l + 1);
            let mid = base + (hi - base) / 2;
            let q = candidates[mid];
            if let Entry::Vacant(slot) = partitions.entry(q.to_bits()) {
                slot.insert(good_partition(instance, q, mode)?);
            }
            let partition = &partitions[&q.to_bits()];
            match search.first_hit_up_to(partition, k, p)? {
                Some((subset, achieved)) => {
                    lo = Some(mid);
                    best = Some((mid, subset, achieved));
                }
                None if search.exhausted() => break,
                None => hi = mid,
            }
        }
        Ok(())
    })?;

    match best {
        Some((idx, subset, achieved)) => {
            let q = candidates[idx];
            let partition = partitions.remove(&q.to_bits()).expect("probed partition is cached");
            search.finish(subset, achieved, q, mode, Objective::Approx, true, partition)
        }
        None => {
            // nothing reaches p even with every concept good; report the best
            // set at the loosest threshold
            let q = 0.0;
            let partition = good_partition(instance, q, mode)?;
            let found = if search.exhausted() {
                None
            } else {
                search.run(|| search.best_up_to(&partition, k))?
            };
            let (subset, achieved) = found.unwrap_or_else(|| (vec![0], 0.0));
            search.finish(subset, achieved, q, mode, Objective::Approx, false, partition)
        }
    }
}

pub fn size_optimize(instance: &Instance, q: f64, p: f64, mode: SimilarityMode) -> Result<SolveResult> {
    size_optimize_with(instance, q, p, mode, &SolveOptions::default())
}

/// Smallest set reaching success probability `p` under the `q`-partition.
/// When even the full example set falls short the result is marked
/// infeasible and carries the full set's probability.
pub fn size_optimize_with(
    instance: &Instance,
    q: f64,
    p: f64,
    mode: SimilarityMode,
    options: &SolveOptions,
) -> Result<SolveResult> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("p = {p} outside [0, 1]")));
    }
    let partition = good_partition(instance, q, mode)?;
    let m = instance.num_examples();
    let search = Search::new(instance, options);
    let hit = search.run(|| search.first_hit_up_to(&partition, m, p))?;
    match hit {
        Some((subset, achieved)) => search.finish(subset, achieved, q, mode, Objective::Size, true, partition),
        None => {
            let all: Vec<usize> = (0..m).collect();
            let achieved = Evaluator::new(instance, &partition)?.evaluate_indices(&all);
            search.finish(all, achieved, q, mode, Objective::Size, false, partition)
        }
    }
}

/// Quantized score, subset, exact probability.
type Scored = (i64, Vec<usize>, f64);

struct Search<'a> {
    instance: &'a Instance,
    options: &'a SolveOptions,
    start: Instant,
    /// Deterministic work count (enumeration positions consumed).
    evaluated: AtomicU64,
    /// Actual evaluations, for budget accounting.
    spent: AtomicU64,
    exhausted: AtomicBool,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, options: &'a SolveOptions) -> Self {
        Self {
            instance,
            options,
            start: Instant::now(),
            evaluated: AtomicU64::new(0),
            spent: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        match self.options.threads {
            Some(threads) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads.max(1))
                    .build()
                    .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?;
                pool.install(f)
            }
            None => f(),
        }
    }

    fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    /// Records one evaluation; returns false once the budget is spent.
    fn charge(&self) -> bool {
        if self.exhausted() {
            return false;
        }
        let spent = self.spent.fetch_add(1, Ordering::Relaxed) + 1;
        let budget = &self.options.budget;
        let over_count = budget.max_subsets.is_some_and(|max| spent > max);
        let over_time = spent.is_multiple_of(256) && budget.max_time.is_some_and(|t| self.start.elapsed() >= t);
        if over_count || over_time {
            self.spent.fetch_sub(1, Ordering::Relaxed);
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn best_up_to(&self, partition: &GoodPartition, k: usize) -> Result<Option<(Vec<usize>, f64)>> {
        let m = self.instance.num_examples();
        let mut best: Option<Scored> = None;
        for size in 1..=k.min(m) {
            let level = self.best_in_level(partition, size)?;
            if let Some((key, subset, p)) = level {
                if best.as_ref().is_none_or(|b| key > b.0) {
                    best = Some((key, subset, p));
                }
            }
            if self.exhausted() {
                break;
            }
        }
        Ok(best.map(|(_, s, p)| (s, p)))
    }

    fn best_in_level(&self, partition: &GoodPartition, size: usize) -> Result<Option<Scored>> {
        let m = self.instance.num_examples();
        Evaluator::new(self.instance, partition)?;
        let chunks: Vec<(u64, Option<Scored>)> = (0..=m - size)
            .into_par_iter()
            .map(|first| {
                let mut eval = Evaluator::new(self.instance, partition).expect("validated above");
                let mut idx: Vec<usize> = (first..first + size).collect();
                let mut best: Option<Scored> = None;
                let mut count = 0u64;
                loop {
                    if !self.charge() {
                        break;
                    }
                    count += 1;
                    let p = eval.evaluate_indices(&idx);
                    let key = score_key(p);
                    if best.as_ref().is_none_or(|b| key > b.0) {
                        best = Some((key, idx.clone(), p));
                    }
                    if !next_combination(&mut idx, 1, m) {
                        break;
                    }
                }
                (count, best)
            })
            .collect();
        let mut best: Option<Scored> = None;
        for (count, chunk) in chunks {
            self.evaluated.fetch_add(count, Ordering::Relaxed);
            if let Some(c) = chunk {
                if best.as_ref().is_none_or(|b| c.0 > b.0) {
                    best = Some(c);
                }
            }
        }
        Ok(best)
    }

    /// First set in enumeration order, of size at most `k`, meeting `target`.
    fn first_hit_up_to(&self, partition: &GoodPartition, k: usize, target: f64) -> Result<Option<(Vec<usize>, f64)>> {
        let m = self.instance.num_examples();
        for size in 1..=k.min(m) {
            if let Some((subset, p)) = self.first_hit_in_level(partition, size, target)? {
                return Ok(Some((subset, p)));
            }
            if self.exhausted() {
                break;
            }
        }
        Ok(None)
    }

    fn first_hit_in_level(
        &self,
        partition: &GoodPartition,
        size: usize,
        target: f64,
    ) -> Result<Option<(Vec<usize>, f64)>> {
        let m = self.instance.num_examples();
        Evaluator::new(self.instance, partition)?;
        let threshold = target - PROBABILITY_TOLERANCE;
        // smallest first element known to contain a hit
        let earliest = AtomicUsize::new(usize::MAX);
        let hits: Vec<Option<(Vec<usize>, f64)>> = (0..=m - size)
            .into_par_iter()
            .map(|first| {
                if first > earliest.load(Ordering::Relaxed) {
                    return None;
                }
                let mut eval = Evaluator::new(self.instance, partition).expect("validated above");
                let mut idx: Vec<usize> = (first..first + size).collect();
                loop {
                    if first > earliest.load(Ordering::Relaxed) || !self.charge() {
                        return None;
                    }
                    let p = eval.evaluate_indices(&idx);
                    if p >= threshold {
                        earliest.fetch_min(first, Ordering::Relaxed);
                        return Some((idx, p));
                    }
                    if !next_combination(&mut idx, 1, m) {
                        return None;
                    }
                }
            })
            .collect();
        let hit = hits.into_iter().flatten().next();
        let consumed = match &hit {
            Some((subset, _)) => lex_rank(subset, m) + 1,
            None => binomial(m, size),
        };
        self.evaluated.fetch_add(consumed, Ordering::Relaxed);
        Ok(hit)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        subset: Vec<usize>,
        achieved_p: f64,
        achieved_q: f64,
        mode: SimilarityMode,
        objective: Objective,
        feasible: bool,
        partition: GoodPartition,
    ) -> Result<SolveResult> {
        let teaching_set = TeachingSet::for_target(self.instance, &subset)?;
        let exhausted = self.exhausted();
        let subsets_evaluated = if exhausted {
            self.spent.load(Ordering::Relaxed)
        } else {
            self.evaluated.load(Ordering::Relaxed)
        };
        Ok(SolveResult {
            size: teaching_set.len(),
            teaching_set,
            achieved_p,
            achieved_q,
            mode,
            objective,
            subsets_evaluated,
            feasible: feasible && !exhausted,
            budget_exhausted: exhausted,
            elapsed: self.start.elapsed(),
            partition,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::tests::worked_example;
    use crate::probability::success_probability;

    const ID: SimilarityMode = SimilarityMode::Identification;

    #[test]
    fn subset_enumeration_order() {
        let all: Vec<_> = enumerate_subsets(3, 1).unwrap().collect();
        assert_eq!(all, vec![vec![0], vec![1], vec![2]]);
        let all: Vec<_> = enumerate_subsets(3, 2).unwrap().collect();
        assert_eq!(
            all,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(enumerate_subsets(20, 3).unwrap().count(), 1350);
        // clamped
        assert_eq!(enumerate_subsets(3, 10).unwrap().count(), 7);
        assert!(enumerate_subsets(3, 0).is_err());
    }

    #[test]
    fn rank_matches_enumeration() {
        for (pos, s) in enumerate_subsets(7, 3).unwrap().filter(|s| s.len() == 3).enumerate() {
            assert_eq!(lex_rank(&s, 7), pos as u64);
        }
        assert_eq!(binomial(1000, 2), 499_500);
        assert_eq!(binomial(5, 7), 0);
    }

    #[test]
    fn probable_worked_example() {
        let inst = worked_example();
        let r = probable_optimize(&inst, 1.0, 1, ID).unwrap();
        assert_eq!(r.teaching_set.example_indices(), vec![0]);
        assert!((r.achieved_p - 0.81).abs() < 1e-12);
        assert_eq!(r.subsets_evaluated, 2);

        let r = probable_optimize(&inst, 1.0, 2, ID).unwrap();
        assert_eq!(r.teaching_set.example_indices(), vec![0, 1]);
        assert!((r.achieved_p - 0.8928).abs() < 1e-12);
        assert_eq!(r.subsets_evaluated, 3);
        let check = success_probability(&inst, &r.teaching_set, &r.partition).unwrap();
        assert!((check - r.achieved_p).abs() < 1e-12);
    }

    #[test]
    fn probable_noiseless_identification() {
        let inst = Instance::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["t".into(), "u".into(), "v".into()],
            vec![vec![true, true, false], vec![true, false, false], vec![false, true, false]],
            vec![vec![0.0; 3]; 3],
            0,
        )
        .unwrap();
        // no single example separates t from both others
        let r = probable_optimize(&inst, 1.0, 1, ID).unwrap();
        assert!(r.achieved_p < 1.0);
        let r = probable_optimize(&inst, 1.0, 2, ID).unwrap();
        assert_eq!(r.achieved_p, 1.0);
        assert_eq!(r.teaching_set.example_indices(), vec![0, 1]);
    }

    #[test]
    fn probable_empty_good_set() {
        let inst = worked_example();
        let r = probable_optimize(&inst, 0.9, 2, SimilarityMode::Employment).unwrap();
        assert_eq!(r.achieved_p, 0.0);
        assert_eq!(r.teaching_set.example_indices(), vec![0]);
    }

    #[test]
    fn approx_worked_example() {
        let inst = worked_example();
        let r = approx_optimize(&inst, 0.8, 1, 1, ID).unwrap();
        assert_eq!(r.achieved_q, 1.0);
        assert!(r.feasible);
        assert_eq!(r.teaching_set.example_indices(), vec![0]);
        assert!((r.achieved_p - 0.81).abs() < 1e-12);

        // q > 0 leaves c1 bad and tops out at 0.8928; at q = 0 both concepts
        // are good and {x1} succeeds with 1 - 0.1·0.9
        let r = approx_optimize(&inst, 0.9, 2, 1, ID).unwrap();
        assert_eq!(r.achieved_q, 0.0);
        assert!(r.feasible);
        assert_eq!(r.teaching_set.example_indices(), vec![0]);
        assert!((r.achieved_p - 0.91).abs() < 1e-12);

        let exact = SolveOptions { exact_q: true, ..Default::default() };
        let r = approx_optimize_with(&inst, 0.8, 1, 1, ID, &exact).unwrap();
        assert_eq!(r.achieved_q, 1.0);
    }

    #[test]
    fn approx_infeasible_everywhere() {
        let inst = worked_example();
        let r = approx_optimize(&inst, 0.99, 2, 2, ID).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.achieved_q, 0.0);
    }

    #[test]
    fn approx_rejects_bad_arguments() {
        let inst = worked_example();
        assert!(approx_optimize(&inst, 0.0, 1, 1, ID).is_err());
        assert!(approx_optimize(&inst, 0.5, 0, 1, ID).is_err());
        assert!(approx_optimize(&inst, 0.5, 1, 13, ID).is_err());
    }

    #[test]
    fn size_worked_example() {
        let inst = worked_example();
        let r = size_optimize(&inst, 1.0, 0.8, ID).unwrap();
        assert_eq!(r.teaching_set.example_indices(), vec![0]);
        assert!((r.achieved_p - 0.81).abs() < 1e-12);

        let r = size_optimize(&inst, 1.0, 0.85, ID).unwrap();
        assert_eq!(r.teaching_set.example_indices(), vec![0, 1]);
        assert!((r.achieved_p - 0.8928).abs() < 1e-12);

        let r = size_optimize(&inst, 1.0, 0.95, ID).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.size, 2);
        assert!((r.achieved_p - 0.8928).abs() < 1e-12);
    }

    #[test]
    fn brute_force_worked_example() {
        let inst = worked_example();
        let part = good_partition(&inst, 1.0, ID).unwrap();
        let s = TeachingSet::for_target(&inst, &[1]).unwrap();
        assert!((brute_force_success(&inst, &s, &part).unwrap() - 0.64).abs() < 1e-12);
        let s = TeachingSet::for_target(&inst, &[0, 1]).unwrap();
        assert!((brute_force_success(&inst, &s, &part).unwrap() - 0.8928).abs() < 1e-12);
    }

    #[test]
    fn brute_force_guard() {
        let inst = crate::generators::gen_random(5, 5, 0.2, 0.5, 1).unwrap();
        let part = good_partition(&inst, 1.0, ID).unwrap();
        let s = TeachingSet::for_target(&inst, &[0, 1, 2, 3, 4]).unwrap();
        assert!(matches!(brute_force_success(&inst, &s, &part), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn budget_stops_search() {
        let inst = crate::generators::gen_random(4, 12, 0.2, 0.5, 3).unwrap();
        let opts = SolveOptions {
            budget: Budget { max_subsets: Some(10), max_time: None },
            threads: Some(1),
            ..Default::default()
        };
        let r = probable_optimize_with(&inst, 1.0, 3, ID, &opts).unwrap();
        assert!(r.budget_exhausted);
        assert!(!r.feasible);
        assert_eq!(r.subsets_evaluated, 10);
    }

    #[test]
    fn parallel_matches_serial() {
        for seed in 0..5 {
            let inst = crate::generators::gen_random(4, 9, 0.3, 0.5, seed).unwrap();
            let serial = SolveOptions { threads: Some(1), ..Default::default() };
            let parallel = SolveOptions { threads: Some(4), ..Default::default() };
            let a = probable_optimize_with(&inst, 0.7, 3, ID, &serial).unwrap();
            let b = probable_optimize_with(&inst, 0.7, 3, ID, &parallel).unwrap();
            assert_eq!(a.teaching_set, b.teaching_set);
            assert_eq!(a.achieved_p.to_bits(), b.achieved_p.to_bits());
            assert_eq!(a.subsets_evaluated, b.subsets_evaluated);
            let a = size_optimize_with(&inst, 0.7, 0.6, ID, &serial).unwrap();
            let b = size_optimize_with(&inst, 0.7, 0.6, ID, &parallel).unwrap();
            assert_eq!(a.teaching_set, b.teaching_set);
            assert_eq!(a.subsets_evaluated, b.subsets_evaluated);
        }
    }
}
