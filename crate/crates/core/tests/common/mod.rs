//! Reference implementations used as independent oracles. Nothing here calls
//! into the library's probability or search code.

#![allow(dead_code)]

use pac_teach::{Instance, SimilarityMode};

/// Per-cell keep probability computed straight from the matrices.
pub fn keep(inst: &Instance, c: usize, x: usize, label: bool) -> f64 {
    let g = inst.gamma(c, x);
    if inst.label(c, x) == label {
        1.0 - g
    } else {
        g
    }
}

/// Good-set mask at threshold `q`, recomputed from the matrices.
pub fn good_mask(inst: &Instance, q: f64, mode: SimilarityMode) -> Vec<bool> {
    let t = inst.target();
    let m = inst.num_examples() as f64;
    (0..inst.num_concepts())
        .map(|c| {
            let s: f64 = (0..inst.num_examples())
                .map(|x| {
                    let agree = inst.label(c, x) == inst.label(t, x);
                    match mode {
                        SimilarityMode::Identification => f64::from(u8::from(agree)),
                        SimilarityMode::Employment => keep(inst, c, x, inst.label(t, x)),
                    }
                })
                .sum::<f64>()
                / m;
            s >= q - 1e-9
        })
        .collect()
}

/// PMF of a count by enumerating all `2^k` outcome vectors.
pub fn enumerated_pmf(keeps: &[f64]) -> Vec<f64> {
    let k = keeps.len();
    let mut pmf = vec![0.0; k + 1];
    for mask in 0u64..(1 << k) {
        let mut w = 1.0;
        for (i, p) in keeps.iter().enumerate() {
            w *= if mask >> i & 1 == 1 { *p } else { 1.0 - p };
        }
        pmf[mask.count_ones() as usize] += w;
    }
    pmf
}

/// Success probability by enumerating every tuple of per-concept counts,
/// each concept's count law obtained by outcome enumeration.
pub fn reference_success(inst: &Instance, subset: &[usize], good: &[bool]) -> f64 {
    let t = inst.target();
    let n = inst.num_concepts();
    let k = subset.len();
    let pmfs: Vec<Vec<f64>> = (0..n)
        .map(|c| {
            let keeps: Vec<f64> = subset.iter().map(|&x| keep(inst, c, x, inst.label(t, x))).collect();
            enumerated_pmf(&keeps)
        })
        .collect();
    let mut counts = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let weight: f64 = (0..n).map(|c| pmfs[c][counts[c]]).product();
        let best_good = (0..n).filter(|&c| good[c]).map(|c| counts[c]).max();
        let best_bad = (0..n).filter(|&c| !good[c]).map(|c| counts[c]).max();
        if let Some(g) = best_good {
            if g >= 1 && best_bad.is_none_or(|b| g > b) {
                total += weight;
            }
        }
        // odometer over (k+1)^n count tuples
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            counts[i] += 1;
            if counts[i] <= k {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// All nonempty subsets of `0..m` with at most `k_max` elements, by size then
/// lexicographically, generated from bitmasks.
pub fn ordered_subsets(m: usize, k_max: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u64..(1 << m))
        .filter(|mask| mask.count_ones() as usize <= k_max)
        .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

fn tie_key(p: f64) -> i64 {
    (p / 1e-12).round() as i64
}

pub fn reference_probable(inst: &Instance, q: f64, k: usize, mode: SimilarityMode) -> (Vec<usize>, f64) {
    let good = good_mask(inst, q, mode);
    let mut best: Option<(i64, Vec<usize>, f64)> = None;
    for s in ordered_subsets(inst.num_examples(), k) {
        let p = reference_success(inst, &s, &good);
        if best.as_ref().is_none_or(|b| tie_key(p) > b.0) {
            best = Some((tie_key(p), s, p));
        }
    }
    let (_, s, p) = best.expect("at least one subset");
    (s, p)
}

pub fn reference_size(inst: &Instance, q: f64, p: f64, mode: SimilarityMode) -> Option<(Vec<usize>, f64)> {
    let good = good_mask(inst, q, mode);
    ordered_subsets(inst.num_examples(), inst.num_examples())
        .into_iter()
        .map(|s| {
            let achieved = reference_success(inst, &s, &good);
            (s, achieved)
        })
        .find(|(_, achieved)| *achieved >= p - 1e-12)
}

/// Classical teaching dimension of the target: the smallest number of
/// examples on which every concept with a different labelling disagrees with
/// the target at least once (a minimum hitting set), floored at one.
pub fn classical_teaching_size(inst: &Instance) -> usize {
    let t = inst.target();
    let m = inst.num_examples();
    let conflicts: Vec<u64> = (0..inst.num_concepts())
        .map(|c| {
            (0..m)
                .filter(|&x| inst.label(c, x) != inst.label(t, x))
                .fold(0u64, |acc, x| acc | 1 << x)
        })
        .filter(|&set| set != 0)
        .collect();
    (0u64..(1 << m))
        .filter(|&mask| conflicts.iter().all(|&c| c & mask != 0))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .expect("the full set hits every conflict")
        .max(1)
}

/// Tiny deterministic generator for test-case parameters (SplitMix64).
pub struct Cases(u64);

impl Cases {
    pub fn new(seed: u64) -> Self {
        Cases(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.range(0, items.len() - 1)]
    }

    /// Random nonempty subset of `0..m` with at most `k_max` elements, sorted.
    pub fn subset(&mut self, m: usize, k_max: usize) -> Vec<usize> {
        let size = self.range(1, k_max.min(m));
        let mut pool: Vec<usize> = (0..m).collect();
        for i in 0..size {
            let j = self.range(i, m - 1);
            pool.swap(i, j);
        }
        let mut s = pool[..size].to_vec();
        s.sort_unstable();
        s
    }
}

/// Instance with concept-independent errors `γ(c, x) = g(x) < 0.5` whose
/// non-target rows all differ from the target row.
pub fn concept_independent(cases: &mut Cases, n: usize, m: usize) -> Instance {
    loop {
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|_| (0..m).map(|_| cases.next_u64() & 1 == 1).collect())
            .collect();
        if rows[1..].iter().any(|r| *r == rows[0]) {
            continue;
        }
        let g: Vec<f64> = (0..m).map(|_| 0.49 * cases.unit()).collect();
        return Instance::new(
            (0..m).map(|i| format!("x{i}")).collect(),
            (0..n).map(|i| format!("c{i}")).collect(),
            rows,
            vec![g; n],
            0,
        )
        .expect("valid instance");
    }
}
