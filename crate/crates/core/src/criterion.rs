//! Mean conditional entropy criterion and intrinsically multivariate
//! prediction scores.
//!
//! The criterion measures how well a candidate predictor set explains a
//! target gene one step ahead: 0 means perfect prediction, 1 means the
//! target stays maximally uncertain. Input patterns never observed in the
//! samples are penalized with a pseudo-count mass `alpha` at maximal
//! entropy, so large candidate sets cannot reach zero for free on short
//! signals.

use crate::error::{parameter, Result};
use crate::expression::ExpressionMatrix;

/// Predictor patterns at time `t` paired with target values at `t + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePairs {
    patterns: Vec<u64>,
    target_values: Vec<u8>,
    arity: usize,
}

impl SamplePairs {
    pub fn count(&self) -> usize {
        self.patterns.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn patterns(&self) -> &[u64] {
        &self.patterns
    }

    pub fn target_values(&self) -> &[u8] {
        &self.target_values
    }
}

fn check_indices(exps: &ExpressionMatrix, target: usize, candidates: &[usize]) -> Result<()> {
    let n = exps.n_genes();
    if target >= n {
        return Err(parameter(format!("target {target} out of range for n={n}")));
    }
    if candidates.len() > 63 {
        return Err(parameter(format!(
            "candidate set of {} genes exceeds the supported arity",
            candidates.len()
        )));
    }
    for (i, &c) in candidates.iter().enumerate() {
        if c >= n {
            return Err(parameter(format!("candidate {c} out of range for n={n}")));
        }
        if candidates[..i].contains(&c) {
            return Err(parameter(format!("duplicate candidate {c}")));
        }
    }
    Ok(())
}

/// Encodes candidate values at times `0..T-1` as integer patterns, gene `j`
/// of the set contributing bit `j`.
pub(crate) fn compose_patterns(exps: &ExpressionMatrix, candidates: &[usize]) -> Vec<u64> {
    let m = exps.n_times() - 1;
    let mut patterns = vec![0u64; m];
    for (j, &c) in candidates.iter().enumerate() {
        let row = exps.row(c);
        for (t, pat) in patterns.iter_mut().enumerate() {
            *pat |= (row[t] as u64) << j;
        }
    }
    patterns
}

/// Collects the `T - 1` transition pairs of a target against a candidate
/// predictor set. An empty candidate set yields zero-arity patterns; a
/// candidate equal to the target is a legal hypothesis.
pub fn extract_pairs(
    exps: &ExpressionMatrix,
    target: usize,
    candidates: &[usize],
) -> Result<SamplePairs> {
    check_indices(exps, target, candidates)?;
    Ok(SamplePairs {
        patterns: compose_patterns(exps, candidates),
        target_values: exps.row(target)[1..].to_vec(),
        arity: candidates.len(),
    })
}

#[inline]
fn group_entropy(n0: u32, n1: u32) -> f64 {
    if n0 == 0 || n1 == 0 {
        return 0.0;
    }
    let tot = (n0 + n1) as f64;
    let p0 = n0 as f64 / tot;
    let p1 = n1 as f64 / tot;
    -(p0 * p0.log2() + p1 * p1.log2())
}

/// Above this arity the counting switches from a dense table to sort-and-group.
const DENSE_LIMIT: usize = 12;

/// Core computation shared by the public entry points. `patterns` and
/// `target_values` must have equal non-zero length.
pub(crate) fn mce_from_parts(
    patterns: &[u64],
    target_values: &[u8],
    arity: usize,
    alpha: f64,
) -> f64 {
    debug_assert_eq!(patterns.len(), target_values.len());
    debug_assert!(!patterns.is_empty());
    let n = patterns.len() as f64;
    let mut weighted = 0.0;
    let mut observed = 0usize;
    if arity <= 6 {
        let mut counts = [[0u32; 2]; 64];
        for (&p, &y) in patterns.iter().zip(target_values) {
            counts[p as usize][y as usize] += 1;
        }
        for &[n0, n1] in counts.iter().take(1 << arity) {
            if n0 + n1 > 0 {
                observed += 1;
                weighted += (n0 + n1) as f64 * group_entropy(n0, n1);
            }
        }
    } else if arity <= DENSE_LIMIT {
        let mut counts = vec![[0u32; 2]; 1 << arity];
        for (&p, &y) in patterns.iter().zip(target_values) {
            counts[p as usize][y as usize] += 1;
        }
        for &[n0, n1] in counts.iter() {
            if n0 + n1 > 0 {
                observed += 1;
                weighted += (n0 + n1) as f64 * group_entropy(n0, n1);
            }
        }
    } else {
        let mut pairs: Vec<(u64, u8)> = patterns
            .iter()
            .copied()
            .zip(target_values.iter().copied())
            .collect();
        pairs.sort_unstable();
        let mut i = 0;
        while i < pairs.len() {
            let pattern = pairs[i].0;
            let mut n0 = 0u32;
            let mut n1 = 0u32;
            while i < pairs.len() && pairs[i].0 == pattern {
                if pairs[i].1 == 0 {
                    n0 += 1;
                } else {
                    n1 += 1;
                }
                i += 1;
            }
            observed += 1;
            weighted += (n0 + n1) as f64 * group_entropy(n0, n1);
        }
    }
    let unobserved = (arity as f64).exp2() - observed as f64;
    let mass = n + alpha * unobserved;
    (weighted + alpha * unobserved) / mass
}

/// Mean conditional entropy of the target given the candidate patterns,
/// normalized to `[0, 1]`: observed patterns weigh their empirical target
/// entropy by frequency, unobserved patterns each add a pseudo-count mass
/// of `alpha` at entropy 1.
pub fn mean_conditional_entropy(pairs: &SamplePairs, alpha: f64) -> Result<f64> {
    if pairs.count() == 0 {
        return Err(parameter("no transition pairs to evaluate"));
    }
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(parameter(format!("alpha must be a finite value >= 0, got {alpha}")));
    }
    Ok(mce_from_parts(
        &pairs.patterns,
        &pairs.target_values,
        pairs.arity,
        alpha,
    ))
}

/// Convenience wrapper: extracts pairs and evaluates the criterion in one go.
pub fn criterion_value(
    exps: &ExpressionMatrix,
    target: usize,
    candidates: &[usize],
    alpha: f64,
) -> Result<f64> {
    let pairs = extract_pairs(exps, target, candidates)?;
    mean_conditional_entropy(&pairs, alpha)
}

/// Prediction quality `F = 1 - mean conditional entropy` of the full set and
/// the best over all proper subsets (the empty set included), by exhaustive
/// enumeration.
pub fn predictiveness(
    exps: &ExpressionMatrix,
    target: usize,
    candidate_set: &[usize],
    alpha: f64,
) -> Result<(f64, f64)> {
    if candidate_set.len() < 2 {
        return Err(parameter(format!(
            "need at least 2 candidates, got {}",
            candidate_set.len()
        )));
    }
    if candidate_set.len() > 20 {
        return Err(parameter(format!(
            "subset enumeration over {} candidates is not supported",
            candidate_set.len()
        )));
    }
    let k = candidate_set.len();
    let full_mask = (1usize << k) - 1;
    let f_full = 1.0 - criterion_value(exps, target, candidate_set, alpha)?;
    let mut best_subset_f = f64::NEG_INFINITY;
    let mut subset = Vec::with_capacity(k);
    for mask in 0..full_mask {
        subset.clear();
        for (j, &c) in candidate_set.iter().enumerate() {
            if mask & (1 << j) != 0 {
                subset.push(c);
            }
        }
        let f = 1.0 - criterion_value(exps, target, &subset, alpha)?;
        if f > best_subset_f {
            best_subset_f = f;
        }
    }
    Ok((f_full, best_subset_f))
}

/// Intrinsically multivariate predictiveness degree: how much the full set
/// out-predicts its best proper subset.
pub fn imp_score(
    exps: &ExpressionMatrix,
    target: usize,
    candidate_set: &[usize],
    alpha: f64,
) -> Result<f64> {
    let (f_full, best_subset_f) = predictiveness(exps, target, candidate_set, alpha)?;
    Ok(f_full - best_subset_f)
}

/// Whether a pair of prediction qualities satisfies the intrinsically
/// multivariate condition: every proper subset predicts poorly
/// (`<= lambda`) while the full set predicts well (`>= delta`).
pub fn is_imp(f_full: f64, f_best_subset: f64, lambda: f64, delta: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&lambda) || !(0.0..=1.0).contains(&delta) || lambda >= delta {
        return Err(parameter(format!(
            "thresholds must satisfy 0 <= lambda < delta <= 1, got lambda={lambda} delta={delta}"
        )));
    }
    Ok(f_best_subset <= lambda && f_full >= delta)
}
