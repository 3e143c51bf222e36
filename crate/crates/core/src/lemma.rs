// SPDX-License-Identifier: Apache-2.0

//! The covering lemma: a size-`k` subset `S ⊂ [N]` hitting many pairs of a
//! fixed pair set `H`, with exact expectations and the ceiling bound.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use thiserror::Error;

use crate::par::{self, Exec};
use crate::Rational;

/// Largest ground set for which [`best_subset`] enumerates every subset.
pub const MAX_EXHAUSTIVE_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("k = {k} exceeds N = {n}")]
    BadK { n: usize, k: usize },
    #[error("pair ({0}, {1}) is not an unordered pair of distinct elements of [N]")]
    BadPair(usize, usize),
    #[error("pair ({0}, {1}) is listed twice")]
    DuplicatePair(usize, usize),
    #[error("N = {0} is too small (need N >= 2)")]
    TooSmall(usize),
    #[error("N = {n} is too large for exhaustive search (max {MAX_EXHAUSTIVE_N}); use sampling")]
    TooLargeForExhaustion { n: usize },
}

/// Ground-set size, subset size, and the pair set `H` (each pair `a < b`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaInstance {
    n: usize,
    k: usize,
    pairs: Vec<(usize, usize)>,
}

impl LemmaInstance {
    pub fn new(
        n: usize,
        k: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, LemmaError> {
        if k > n {
            return Err(LemmaError::BadK { n, k });
        }
        let mut out = Vec::new();
        for (a, b) in pairs {
            let (a, b) = (a.min(b), a.max(b));
            if a == b || b >= n {
                return Err(LemmaError::BadPair(a, b));
            }
            out.push((a, b));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(LemmaError::DuplicatePair(w[0].0, w[0].1));
        }
        Ok(LemmaInstance { n, k, pairs: out })
    }

    /// `k = floor(N / 2)`.
    pub fn with_half_k(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, LemmaError> {
        Self::new(n, n / 2, pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Pairs of `H` with at least one end in the subset given as a bit mask.
    pub fn coverage(&self, mask: u64) -> usize {
        self.pairs
            .iter()
            .filter(|&&(a, b)| (mask >> a) & 1 == 1 || (mask >> b) & 1 == 1)
            .count()
    }
}

/// `C(N, 2) / 2` when it is an integer, i.e. `N = 0, 1 (mod 4)`.
pub fn half_pair_count(n: usize) -> Option<usize> {
    let total = n * n.saturating_sub(1) / 2;
    total.is_multiple_of(2).then_some(total / 2)
}

/// `|H| (1 - C(N-2, k) / C(N, k))`. The binomial ratio is
/// `(N-k)(N-k-1) / (N(N-1))`.
pub fn expected_coverage(inst: &LemmaInstance) -> Rational {
    let (n, k) = (inst.n as i128, inst.k as i128);
    let h = inst.pairs.len() as i128;
    if n < 2 {
        return Rational::from_integer(0);
    }
    let miss = Rational::new((n - k) * (n - k - 1), n * (n - 1));
    Rational::from_integer(h) * (Rational::from_integer(1) - miss)
}

/// `(2kN - k^2 - k) / 4`, the expectation when `|H| = C(N,2)/2`.
pub fn half_set_expectation(n: usize) -> Rational {
    let (n, k) = (n as i128, (n / 2) as i128);
    Rational::new(2 * k * n - k * k - k, 4)
}

/// `ceil((2kN - k^2 - k) / 4)` with `k = floor(N/2)`.
pub fn lemma_bound(n: usize) -> Result<i128, LemmaError> {
    if n < 2 {
        return Err(LemmaError::TooSmall(n));
    }
    Ok(half_set_expectation(n).ceil().to_integer())
}

/// Exhaustive maximiser over all size-`k` subsets; ties go to the
/// lexicographically smallest sorted subset.
pub fn best_subset(inst: &LemmaInstance) -> Result<(Vec<usize>, usize), LemmaError> {
    best_subset_with(inst, Exec::default())
}

pub fn best_subset_with(
    inst: &LemmaInstance,
    exec: Exec,
) -> Result<(Vec<usize>, usize), LemmaError> {
    if inst.n > MAX_EXHAUSTIVE_N {
        return Err(LemmaError::TooLargeForExhaustion { n: inst.n });
    }
    let masks = subset_masks(inst.n, inst.k);
    let best = par::min_over(exec, masks.len(), |i| {
        let mask = masks[i];
        Some((std::cmp::Reverse(inst.coverage(mask)), mask_to_vec(mask)))
    })
    .expect("C(N, k) >= 1");
    Ok((best.1, best.0 .0))
}

/// Best coverage among `samples` uniformly random size-`k` subsets. An
/// empirical figure only.
pub fn sample_best_subset(inst: &LemmaInstance, samples: usize, seed: u64) -> (Vec<usize>, usize) {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut ground: Vec<usize> = (0..inst.n).collect();
    for _ in 0..samples.max(1) {
        partial_shuffle(&mut rng, &mut ground, inst.k);
        let mut s = ground[..inst.k].to_vec();
        s.sort_unstable();
        let cov = inst
            .pairs
            .iter()
            .filter(|(a, b)| s.binary_search(a).is_ok() || s.binary_search(b).is_ok())
            .count();
        if best
            .as_ref()
            .is_none_or(|(c, bs)| cov > *c || (cov == *c && s < *bs))
        {
            best = Some((cov, s));
        }
    }
    let (c, s) = best.expect("at least one sample");
    (s, c)
}

fn partial_shuffle(rng: &mut SplitMix64, xs: &mut [usize], k: usize) {
    let n = xs.len();
    for i in 0..k.min(n) {
        let j = i + (rng.next_u64() % (n - i) as u64) as usize;
        xs.swap(i, j);
    }
}

/// Seeded uniform choice of `size` distinct pairs from `[N]`.
pub fn random_pairs(n: usize, size: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut all: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    assert!(size <= all.len(), "asked for {size} of {} pairs", all.len());
    let mut rng = SplitMix64::seed_from_u64(seed);
    let len = all.len();
    for i in 0..size {
        let j = i + (rng.next_u64() % (len - i) as u64) as usize;
        all.swap(i, j);
    }
    all.truncate(size);
    all.sort_unstable();
    all
}

fn subset_masks(n: usize, k: usize) -> Vec<u64> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| (mask >> i) & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCheck {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub bound: Rational,
    pub holds: bool,
}

/// `delta_N = (ceil(E) - E) / (N + k)^2` against `4 / (9 N^2)`.
pub fn delta_check(n: usize) -> Result<DeltaCheck, LemmaError> {
    if n < 2 {
        return Err(LemmaError::TooSmall(n));
    }
    let k = n / 2;
    let e = half_set_expectation(n);
    let nk = (n + k) as i128;
    let delta = (e.ceil() - e) / Rational::from_integer(nk * nk);
    let bound = Rational::new(4, 9 * (n as i128) * (n as i128));
    Ok(DeltaCheck {
        n,
        k,
        delta,
        bound,
        holds: delta <= bound,
    })
}

/// Summary for one `N`, as printed by the `lemma` subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageResult {
    pub n: usize,
    pub k: usize,
    pub h_size: usize,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub expectation: Rational,
    #[serde(serialize_with = "crate::serialize_rational_opt")]
    pub closed_form: Option<Rational>,
    pub bound: Option<i128>,
    pub best_subset: Option<Vec<usize>>,
    pub best_coverage: Option<usize>,
    pub exhaustive: bool,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub delta: Rational,
    pub delta_holds: bool,
}

impl CoverageResult {
    /// Contracted identities that fail for this record.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(cf) = self.closed_form {
            if cf != self.expectation {
                out.push(format!(
                    "expectation {} != closed form {cf}",
                    self.expectation
                ));
            }
        }
        if let (true, Some(b), Some(c)) = (self.exhaustive, self.bound, self.best_coverage) {
            if (c as i128) < b {
                out.push(format!("best coverage {c} below bound {b}"));
            }
        }
        if !self.delta_holds {
            out.push(format!("delta {} exceeds 4/(9N^2)", self.delta));
        }
        out
    }
}

/// Runs the lemma for `N` on a seeded random `H`. `H` has `C(N,2)/2` pairs
/// when that is an integer, otherwise the floor of it; the bound is only
/// reported in the integral case. Exhaustive up to [`MAX_EXHAUSTIVE_N`],
/// sampled beyond.
pub fn coverage_result(n: usize, seed: u64, exec: Exec) -> Result<CoverageResult, LemmaError> {
    let delta = delta_check(n)?;
    let half = half_pair_count(n);
    let size = half.unwrap_or(n * (n - 1) / 4);
    let inst = LemmaInstance::with_half_k(n, random_pairs(n, size, seed))?;
    let (best, cov, exhaustive) = if n <= MAX_EXHAUSTIVE_N {
        let (b, c) = best_subset_with(&inst, exec)?;
        (b, c, true)
    } else {
        let (b, c) = sample_best_subset(&inst, 1000, seed);
        (b, c, false)
    };
    Ok(CoverageResult {
        n,
        k: inst.k,
        h_size: size,
        expectation: expected_coverage(&inst),
        closed_form: half.map(|_| half_set_expectation(n)),
        bound: match half {
            Some(_) => Some(lemma_bound(n)?),
            None => None,
        },
        best_subset: Some(best),
        best_coverage: Some(cov),
        exhaustive,
        delta: delta.delta,
        delta_holds: delta.holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Test oracle: average coverage over every k-subset.
    fn exhaustive_average(inst: &LemmaInstance) -> Rational {
        let masks = subset_masks(inst.n(), inst.k());
        let total: usize = masks.iter().map(|&m| inst.coverage(m)).sum();
        Rational::new(total as i128, masks.len() as i128)
    }

    #[test]
    fn expectation_examples() {
        let h = [(0, 1), (2, 3), (0, 2)];
        let inst = LemmaInstance::new(4, 2, h).unwrap();
        assert_eq!(exhaustive_average(&inst), Rational::new(5, 2));
        assert_eq!(expected_coverage(&inst), Rational::new(5, 2));
        assert_eq!(half_set_expectation(4), Rational::new(5, 2));
        assert_eq!(
            expected_coverage(&LemmaInstance::new(4, 0, h).unwrap()),
            Rational::from_integer(0)
        );
        assert_eq!(
            expected_coverage(&LemmaInstance::new(4, 4, h).unwrap()),
            Rational::from_integer(3)
        );
    }

    #[test]
    fn bound_examples() {
        assert_eq!(lemma_bound(4), Ok(3));
        assert_eq!(lemma_bound(5), Ok(4));
        assert_eq!(lemma_bound(1), Err(LemmaError::TooSmall(1)));
    }

    #[test]
    fn bound_for_n5_attained_by_every_h() {
        // all C(10, 5) pair sets of size 5 on [5]
        let all: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        for sel in 0u32..1 << all.len() {
            if sel.count_ones() != 5 {
                continue;
            }
            let h = all
                .iter()
                .enumerate()
                .filter(|(i, _)| (sel >> i) & 1 == 1)
                .map(|(_, p)| *p);
            let inst = LemmaInstance::with_half_k(5, h).unwrap();
            let (_, cov) = best_subset(&inst).unwrap();
            assert!(cov as i128 >= 4);
        }
    }

    #[test]
    fn best_subset_examples() {
        let inst = LemmaInstance::new(4, 2, [(0, 1), (2, 3), (0, 2)]).unwrap();
        let (s, c) = best_subset(&inst).unwrap();
        assert_eq!(c, 3);
        // {0,2} and {0,3} both hit everything; lexicographic tie-break
        assert_eq!(s, vec![0, 2]);
        let empty = LemmaInstance::new(6, 3, []).unwrap();
        assert_eq!(best_subset(&empty).unwrap().1, 0);
        let big = LemmaInstance::new(17, 8, []).unwrap();
        assert_eq!(
            best_subset(&big),
            Err(LemmaError::TooLargeForExhaustion { n: 17 })
        );
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            LemmaInstance::new(3, 4, []),
            Err(LemmaError::BadK { n: 3, k: 4 })
        );
        assert_eq!(
            LemmaInstance::new(3, 1, [(1, 1)]),
            Err(LemmaError::BadPair(1, 1))
        );
        assert_eq!(
            LemmaInstance::new(3, 1, [(0, 3)]),
            Err(LemmaError::BadPair(0, 3))
        );
        assert_eq!(
            LemmaInstance::new(3, 1, [(0, 1), (1, 0)]),
            Err(LemmaError::DuplicatePair(0, 1))
        );
    }

    #[test]
    fn delta_examples() {
        let d = delta_check(4).unwrap();
        assert_eq!(d.delta, Rational::new(1, 72));
        assert_eq!(d.bound, Rational::new(1, 36));
        assert!(d.holds);
        // 2kN - k^2 - k = 16 - 4 - 2... N = 8: 64 - 16 - 4 = 44, divisible by 4
        assert_eq!(delta_check(8).unwrap().delta, Rational::from_integer(0));
        assert!(delta_check(1).is_err());
    }

    #[test]
    fn expectation_depends_only_on_size() {
        for n in 2..=10 {
            let k = n / 2;
            let total = n * (n - 1) / 2;
            for size in [0, total / 3, total / 2, total] {
                let expected =
                    expected_coverage(&LemmaInstance::new(n, k, random_pairs(n, size, 0)).unwrap());
                for seed in 0..20 {
                    let inst = LemmaInstance::new(n, k, random_pairs(n, size, seed)).unwrap();
                    assert_eq!(exhaustive_average(&inst), expected);
                }
            }
        }
    }

    #[test]
    fn sampling_never_beats_exhaustion() {
        let inst = LemmaInstance::with_half_k(12, random_pairs(12, 33, 5)).unwrap();
        let (_, exact) = best_subset(&inst).unwrap();
        let (s, sampled) = sample_best_subset(&inst, 200, 5);
        assert_eq!(s.len(), 6);
        assert!(sampled <= exact);
    }

    #[test]
    fn coverage_record_for_four() {
        let r = coverage_result(4, 0, Exec::Sequential).unwrap();
        assert_eq!(r.expectation, Rational::new(5, 2));
        assert_eq!(r.bound, Some(3));
        assert!(r.violations().is_empty());
        let odd = coverage_result(6, 0, Exec::Sequential).unwrap();
        assert_eq!(odd.bound, None);
        assert_eq!(odd.h_size, 7);
    }
}
