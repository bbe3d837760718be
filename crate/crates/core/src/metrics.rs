//! Similarity scoring of inferred networks against ground truth.

use std::collections::HashSet;

use crate::error::{parameter, Result};
use crate::netgen::DirectedGeneNetwork;
use crate::search::InferredNetwork;

/// Directed-edge confusion counts and the derived similarity measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityReport {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub ppv: f64,
    pub sensitivity: f64,
    /// Geometric mean of PPV and sensitivity.
    pub similarity: f64,
}

/// Compares inferred and true edges as directed `predictor -> target` pairs.
///
/// Degenerate denominators: with no inferred edges, PPV is 1 when the truth
/// is also empty and 0 otherwise; with no true edges, sensitivity is 1
/// (nothing to recover).
pub fn score(truth: &DirectedGeneNetwork, inferred: &InferredNetwork) -> Result<SimilarityReport> {
    if truth.n() != inferred.n {
        return Err(parameter(format!(
            "gene counts differ: truth {} vs inferred {}",
            truth.n(),
            inferred.n
        )));
    }
    let truth_edges: HashSet<(usize, usize)> = truth.edges().collect();
    let inferred_edges: HashSet<(usize, usize)> = inferred.edges().into_iter().collect();
    let tp = inferred_edges.intersection(&truth_edges).count();
    let fp = inferred_edges.len() - tp;
    let fn_ = truth_edges.len() - tp;
    let ppv = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else if truth_edges.is_empty() {
        1.0
    } else {
        0.0
    };
    let sensitivity = if tp + fn_ > 0 {
        tp as f64 / (tp + fn_) as f64
    } else {
        1.0
    };
    Ok(SimilarityReport {
        tp,
        fp,
        fn_,
        ppv,
        sensitivity,
        similarity: (ppv * sensitivity).sqrt(),
    })
}

/// Distribution summary of similarity values across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Summarizes a batch of reports by their similarity values.
pub fn aggregate(reports: &[SimilarityReport]) -> Result<SummaryStats> {
    let values: Vec<f64> = reports.iter().map(|r| r.similarity).collect();
    aggregate_values(&values)
}

/// Mean, sample standard deviation, extrema and linearly interpolated
/// quartiles of a non-empty batch of values.
pub fn aggregate_values(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(parameter("nothing to aggregate"));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std_dev = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(SummaryStats {
        mean,
        std_dev,
        min: sorted[0],
        max: sorted[n - 1],
        q1: quantile_linear(&sorted, 0.25),
        median: quantile_linear(&sorted, 0.5),
        q3: quantile_linear(&sorted, 0.75),
    })
}

/// Quantile with linear interpolation between order statistics.
fn quantile_linear(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}
