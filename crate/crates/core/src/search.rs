//! Feature-selection search strategies for recovering predictor sets.
//!
//! Three strategies share the mean conditional entropy criterion:
//!
//! * [`sfs`] / [`sfs_adaptive`] — plain greedy forward selection;
//! * [`sffs`] — floating search that stores the best subset per cardinality
//!   and lets features leave the partial solution again;
//! * [`network_inference`] — the scale-free-prior scheduler: round `k`
//!   expands predictor sets to cardinality `k` for the currently active
//!   targets, then shrinks the active set following a power law
//!   `n <- n * k^-gamma`, so search depth is spent on the few targets that
//!   keep gaining, the way hubs concentrate edges in scale-free networks.

use std::str::FromStr;

use crate::criterion::{compose_patterns, criterion_value, mce_from_parts};
use crate::error::{parameter, Error, Result};
use crate::expression::ExpressionMatrix;
use crate::netgen::{DirectedGeneNetwork, Topology};

/// How the scheduler turns the real-valued active-target count into an
/// integer after each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleRounding {
    Floor,
    Round,
}

/// Tuning knobs shared by the search strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Power-law decay of the active-target count across rounds.
    pub gamma: f64,
    /// Minimum criterion improvement required to accept a larger predictor
    /// set; guards against growth driven by estimation noise.
    pub delta: f64,
    /// Pseudo-count mass for unobserved predictor patterns.
    pub alpha: f64,
    /// Targets whose criterion value falls to this level or below are
    /// considered solved and stop being expanded.
    pub optimum_epsilon: f64,
    /// Hard cap on predictor-set cardinality.
    pub max_cardinality: usize,
    pub rounding: ScheduleRounding,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            gamma: 2.5,
            delta: 0.05,
            alpha: 1.0,
            optimum_epsilon: 0.01,
            max_cardinality: 5,
            rounding: ScheduleRounding::Floor,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma <= 0.0 || !self.gamma.is_finite() {
            return Err(parameter(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if self.delta < 0.0 || !self.delta.is_finite() {
            return Err(parameter(format!("delta must be >= 0, got {}", self.delta)));
        }
        if self.alpha < 0.0 || !self.alpha.is_finite() {
            return Err(parameter(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if self.optimum_epsilon < 0.0 || !self.optimum_epsilon.is_finite() {
            return Err(parameter(format!(
                "optimum_epsilon must be >= 0, got {}",
                self.optimum_epsilon
            )));
        }
        if self.max_cardinality == 0 {
            return Err(parameter("max_cardinality must be at least 1"));
        }
        Ok(())
    }
}

/// The search strategies the benchmark harness can compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Sfs,
    Sffs,
    SffsBa,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Sfs => "SFS",
            Method::Sffs => "SFFS",
            Method::SffsBa => "SFFS-BA",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SFS" => Ok(Method::Sfs),
            "SFFS" => Ok(Method::Sffs),
            "SFFS-BA" | "SFFS_BA" | "SFFSBA" => Ok(Method::SffsBa),
            other => Err(parameter(format!("unknown method `{other}`"))),
        }
    }
}

/// Working record of one target threaded through the inference rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceState {
    pub target: usize,
    /// Candidate predictor sets carried into the next round.
    pub psets: Vec<Vec<usize>>,
    /// Best criterion value reached so far.
    pub cfv: f64,
    /// Criterion improvement achieved in the last expansion round.
    pub gain: f64,
    /// Best predictor set reached so far (matches `cfv`).
    pub best_set: Vec<usize>,
    pub rounds_active: u32,
}

/// Result of one inner expansion round for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerOutcome {
    /// Candidate pool for the next round: all evaluated singletons (ranked
    /// best-first) at `k = 1`, only the champion set for `k > 1`.
    pub psets: Vec<Vec<usize>>,
    pub best_cfv: f64,
    /// `incoming cfv - best_cfv`, never negative.
    pub gain: f64,
    /// Champion set accepted this round, if any.
    pub best_set: Option<Vec<usize>>,
}

/// Per-target outcome of a full network inference.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetResult {
    pub target: usize,
    pub predictors: Vec<usize>,
    pub cfv: f64,
    pub rounds_active: u32,
}

/// One scheduler round: cardinality, allowed active-target budget, and how
/// many targets were actually expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundStats {
    pub k: usize,
    pub budget: usize,
    pub processed: usize,
}

/// A recovered network: per-target predictor sets plus the executed
/// scheduler trace.
#[derive(Debug, Clone, PartialEq)]
pub struct InferredNetwork {
    pub n: usize,
    pub results: Vec<TargetResult>,
    pub rounds: Vec<RoundStats>,
}

impl InferredNetwork {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for r in &self.results {
            for &p in &r.predictors {
                edges.push((p, r.target));
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.results.iter().map(|r| r.predictors.len()).sum()
    }

    pub fn to_network(&self, seed: u64) -> Result<DirectedGeneNetwork> {
        DirectedGeneNetwork::from_edges(self.n, &self.edges(), Topology::Inferred, seed)
    }
}

fn check_exps(exps: &ExpressionMatrix) -> Result<()> {
    if exps.n_times() < 2 {
        return Err(parameter("need at least 2 time points for transition pairs"));
    }
    Ok(())
}

fn check_target(exps: &ExpressionMatrix, target: usize) -> Result<()> {
    if target >= exps.n_genes() {
        return Err(parameter(format!(
            "target {target} out of range for n={}",
            exps.n_genes()
        )));
    }
    Ok(())
}

fn check_set(exps: &ExpressionMatrix, set: &[usize]) -> Result<()> {
    for (i, &g) in set.iter().enumerate() {
        if g >= exps.n_genes() {
            return Err(parameter(format!("gene {g} out of range")));
        }
        if set[..i].contains(&g) {
            return Err(parameter(format!("duplicate gene {g} in set")));
        }
    }
    Ok(())
}

fn mce_of(exps: &ExpressionMatrix, target: usize, set: &[usize], alpha: f64) -> f64 {
    let patterns = compose_patterns(exps, set);
    mce_from_parts(&patterns, &exps.row(target)[1..], set.len(), alpha)
}

/// Scans all genes outside `set` (and distinct from the target) for the
/// single addition minimizing the criterion; ties resolve to the lowest
/// gene index.
fn best_addition(
    exps: &ExpressionMatrix,
    target: usize,
    set: &[usize],
    patterns: &[u64],
    alpha: f64,
    buf: &mut [u64],
) -> Option<(usize, f64)> {
    let ycol = &exps.row(target)[1..];
    let mut best: Option<(usize, f64)> = None;
    for c in 0..exps.n_genes() {
        if c == target || set.contains(&c) {
            continue;
        }
        let row = exps.row(c);
        for (t, b) in buf.iter_mut().enumerate() {
            *b = (patterns[t] << 1) | row[t] as u64;
        }
        let v = mce_from_parts(buf, ycol, set.len() + 1, alpha);
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((c, v));
        }
    }
    best
}

/// Finds the in-set feature whose removal minimizes the criterion; ties
/// resolve to the earliest position.
fn best_removal(
    exps: &ExpressionMatrix,
    target: usize,
    set: &[usize],
    alpha: f64,
) -> Option<(usize, f64)> {
    if set.len() < 2 {
        return None;
    }
    let ycol = &exps.row(target)[1..];
    let mut best: Option<(usize, f64)> = None;
    let mut reduced = Vec::with_capacity(set.len() - 1);
    for pos in 0..set.len() {
        reduced.clear();
        reduced.extend(set.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &g)| g));
        let patterns = compose_patterns(exps, &reduced);
        let v = mce_from_parts(&patterns, ycol, reduced.len(), alpha);
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((pos, v));
        }
    }
    best
}

/// Greedy forward selection: starting from `base_set`, repeatedly adds the
/// feature that minimizes the criterion until the set reaches
/// `target_size`. Deterministic; ties resolve to the lowest gene index.
pub fn sfs(
    exps: &ExpressionMatrix,
    target: usize,
    base_set: &[usize],
    target_size: usize,
    alpha: f64,
) -> Result<(Vec<usize>, f64)> {
    check_exps(exps)?;
    check_target(exps, target)?;
    check_set(exps, base_set)?;
    if base_set.len() > target_size {
        return Err(parameter(format!(
            "base set of {} exceeds target size {target_size}",
            base_set.len()
        )));
    }
    let pool = (0..exps.n_genes())
        .filter(|&g| g != target && !base_set.contains(&g))
        .count();
    if target_size > base_set.len() + pool {
        return Err(parameter(format!(
            "target size {target_size} not reachable with {} candidates",
            base_set.len() + pool
        )));
    }
    let mut set = base_set.to_vec();
    let mut patterns = compose_patterns(exps, &set);
    let ycol = &exps.row(target)[1..];
    let mut value = mce_from_parts(&patterns, ycol, set.len(), alpha);
    let mut buf = vec![0u64; patterns.len()];
    while set.len() < target_size {
        let (c, v) = best_addition(exps, target, &set, &patterns, alpha, &mut buf)
            .expect("pool size was checked");
        let row = exps.row(c);
        for (t, p) in patterns.iter_mut().enumerate() {
            *p = (*p << 1) | row[t] as u64;
        }
        set.push(c);
        value = v;
    }
    set.sort_unstable();
    Ok((set, value))
}

/// Greedy forward selection with an adaptive stop: keeps adding features
/// while the best single addition strictly improves the criterion, up to
/// `max_cardinality`. This is the plain-SFS behaviour used for whole-network
/// inference, where no fixed subset size is known in advance.
pub fn sfs_adaptive(
    exps: &ExpressionMatrix,
    target: usize,
    alpha: f64,
    max_cardinality: usize,
) -> Result<(Vec<usize>, f64)> {
    check_exps(exps)?;
    check_target(exps, target)?;
    let mut set: Vec<usize> = Vec::new();
    let mut patterns = compose_patterns(exps, &set);
    let ycol = &exps.row(target)[1..];
    let mut value = mce_from_parts(&patterns, ycol, 0, alpha);
    let mut buf = vec![0u64; patterns.len()];
    while set.len() < max_cardinality.min(exps.n_genes() - 1) {
        match best_addition(exps, target, &set, &patterns, alpha, &mut buf) {
            Some((c, v)) if v < value => {
                let row = exps.row(c);
                for (t, p) in patterns.iter_mut().enumerate() {
                    *p = (*p << 1) | row[t] as u64;
                }
                set.push(c);
                value = v;
            }
            _ => break,
        }
    }
    set.sort_unstable();
    Ok((set, value))
}

/// Backward elimination: repeatedly drops the feature whose removal gives
/// the best criterion value, as long as the removal does not worsen the
/// current value; stops at one remaining feature.
pub fn sbs(
    exps: &ExpressionMatrix,
    target: usize,
    set: &[usize],
    alpha: f64,
) -> Result<(Vec<usize>, f64)> {
    check_exps(exps)?;
    check_target(exps, target)?;
    check_set(exps, set)?;
    if set.is_empty() {
        return Err(parameter("cannot eliminate features from an empty set"));
    }
    let mut cur = set.to_vec();
    cur.sort_unstable();
    let mut value = mce_of(exps, target, &cur, alpha);
    while cur.len() >= 2 {
        let (pos, v) = best_removal(exps, target, &cur, alpha).expect("len >= 2");
        if v <= value {
            cur.remove(pos);
            value = v;
        } else {
            break;
        }
    }
    Ok((cur, value))
}

/// Near-tie margin for picking the final cardinality: a larger subset must
/// beat a smaller one by more than this to be preferred, so targets with a
/// flat criterion profile resolve to a single predictor rather than
/// accumulating noise features.
const CARDINALITY_TIE_MARGIN: f64 = 0.01;

/// Floating forward selection: per-cardinality best subsets from
/// [`sffs_profile`], final answer chosen smallest-cardinality-first among
/// near-ties.
pub fn sffs(
    exps: &ExpressionMatrix,
    target: usize,
    max_size: usize,
    alpha: f64,
) -> Result<(Vec<usize>, f64)> {
    let profile = sffs_profile(exps, target, max_size, alpha)?;
    let mut chosen: Option<(Vec<usize>, f64)> = None;
    for entry in profile.into_iter().skip(1).flatten() {
        match &chosen {
            Some((_, cv)) if entry.1 + CARDINALITY_TIE_MARGIN >= *cv => {}
            _ => chosen = Some(entry),
        }
    }
    chosen.ok_or_else(|| parameter("floating search produced no candidate sets"))
}

/// Best subset and criterion value stored for one cardinality.
pub type StoredBest = Option<(Vec<usize>, f64)>;

/// Runs the floating search and returns the stored best subset for every
/// cardinality `0..=max_size` (index = cardinality; `None` if never
/// reached). Forward steps are greedy additions; after each one, features
/// are conditionally excluded again while the exclusion strictly improves
/// the stored best of the smaller cardinality.
pub fn sffs_profile(
    exps: &ExpressionMatrix,
    target: usize,
    max_size: usize,
    alpha: f64,
) -> Result<Vec<StoredBest>> {
    check_exps(exps)?;
    check_target(exps, target)?;
    if max_size < 1 || max_size > exps.n_genes() {
        return Err(parameter(format!(
            "max_size must be in [1, {}], got {max_size}",
            exps.n_genes()
        )));
    }
    let effective = max_size.min(exps.n_genes() - 1);
    let ycol = &exps.row(target)[1..];
    let mut best: Vec<StoredBest> = vec![None; effective + 1];
    let mut cur: Vec<usize> = Vec::new();
    let mut patterns = compose_patterns(exps, &cur);
    let mut buf = vec![0u64; patterns.len()];
    let value = mce_from_parts(&patterns, ycol, 0, alpha);
    best[0] = Some((Vec::new(), value));
    while cur.len() < effective {
        let (c, v) =
            best_addition(exps, target, &cur, &patterns, alpha, &mut buf).expect("pool checked");
        let row = exps.row(c);
        for (t, p) in patterns.iter_mut().enumerate() {
            *p = (*p << 1) | row[t] as u64;
        }
        cur.push(c);
        let card = cur.len();
        if best[card].as_ref().is_none_or(|(_, bv)| v < *bv) {
            let mut stored = cur.clone();
            stored.sort_unstable();
            best[card] = Some((stored, v));
        }
        // Conditional exclusion: float features back out while that beats
        // the best already seen at the smaller cardinality.
        while cur.len() > 2 {
            let (pos, v) = best_removal(exps, target, &cur, alpha).expect("len > 2");
            let smaller = cur.len() - 1;
            if best[smaller].as_ref().is_none_or(|(_, bv)| v < *bv) {
                cur.remove(pos);
                patterns = compose_patterns(exps, &cur);
                let mut stored = cur.clone();
                stored.sort_unstable();
                best[smaller] = Some((stored, v));
            } else {
                break;
            }
        }
    }
    Ok(best)
}

/// One expansion round of the prior-guided search for a single target.
///
/// An empty `psets` pool is seeded with every singleton predictor set
/// (self-prediction excluded). Each pooled set of cardinality at most `k`
/// is expanded to cardinality `k` by greedy forward selection; an expansion
/// that improves on the running best value by more than `delta` is pruned
/// by backward elimination and becomes the new champion.
///
/// At `k = 1` the outcome pool carries all evaluated singletons ranked
/// best-first and `best_cfv` is the plain minimum over them, so the next
/// round can still expand every individual predictor; at `k > 1` only the
/// champion set is carried forward.
pub fn sffs_ba_inner(
    exps: &ExpressionMatrix,
    target: usize,
    cfv: f64,
    psets: Vec<Vec<usize>>,
    k: usize,
    delta: f64,
    alpha: f64,
) -> Result<InnerOutcome> {
    check_exps(exps)?;
    check_target(exps, target)?;
    if k < 1 {
        return Err(parameter("cardinality k must be at least 1"));
    }
    let mut pool = psets;
    if pool.is_empty() {
        pool = (0..exps.n_genes())
            .filter(|&g| g != target)
            .map(|g| vec![g])
            .collect();
    }
    // Process the queue prefix of sets no larger than k; anything beyond
    // stays untouched.
    let cut = pool.iter().position(|s| s.len() > k).unwrap_or(pool.len());
    let leftovers: Vec<Vec<usize>> = pool.split_off(cut);
    let max_reachable = exps.n_genes() - 1;

    if k == 1 {
        let mut ranked: Vec<(f64, Vec<usize>)> = Vec::with_capacity(pool.len());
        for s in pool {
            let size = 1.max(s.len()).min(max_reachable);
            let (expanded, v) = sfs(exps, target, &s, size, alpha)?;
            ranked.push((v, expanded));
        }
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let (min_v, min_set) = match ranked.first() {
            Some((v, s)) => (*v, s.clone()),
            None => (cfv, Vec::new()),
        };
        let best_cfv = min_v.min(cfv);
        let best_set = (min_v < cfv).then_some(min_set);
        let mut out: Vec<Vec<usize>> = ranked.into_iter().map(|(_, s)| s).collect();
        out.extend(leftovers);
        return Ok(InnerOutcome {
            psets: out,
            best_cfv,
            gain: cfv - best_cfv,
            best_set,
        });
    }

    let first_incoming = pool.first().cloned();
    let mut best_cfv = cfv;
    let mut best_set: Option<Vec<usize>> = None;
    for s in pool {
        let size = k.max(s.len()).min(max_reachable);
        let (expanded, v) = sfs(exps, target, &s, size, alpha)?;
        if v < best_cfv && (best_cfv - v) > delta {
            let (pruned, pv) = sbs(exps, target, &expanded, alpha)?;
            best_cfv = pv;
            best_set = Some(pruned);
        }
    }
    let carried = best_set
        .clone()
        .or(first_incoming)
        .unwrap_or_default();
    Ok(InnerOutcome {
        psets: vec![carried],
        best_cfv,
        gain: cfv - best_cfv,
        best_set,
    })
}

fn next_budget(budget: usize, k: usize, cfg: &SearchConfig) -> usize {
    let x = budget as f64 * (k as f64).powf(-cfg.gamma);
    match cfg.rounding {
        ScheduleRounding::Floor => x.floor() as usize,
        ScheduleRounding::Round => x.round() as usize,
    }
}

/// Whole-network inference with the scale-free prior.
///
/// Every target starts with all singleton candidates; round `k` expands the
/// predictor sets of the active targets to cardinality `k`, targets are
/// ranked by their latest criterion gain, and the number of targets allowed
/// into the next round shrinks as `n <- n * k^-gamma`. Targets whose value
/// reaches `optimum_epsilon` are considered solved and skip further rounds.
///
/// A target whose final value does not improve on its empty-set criterion
/// by more than `delta` is reported without predictors: its temporal
/// behaviour is indistinguishable from a source gene's.
pub fn network_inference(
    targets: &[usize],
    exps: &ExpressionMatrix,
    cfg: &SearchConfig,
) -> Result<InferredNetwork> {
    cfg.validate()?;
    check_exps(exps)?;
    if targets.is_empty() {
        return Err(parameter("no targets to infer"));
    }
    check_set(exps, targets)?;

    let mut states: Vec<InferenceState> = Vec::with_capacity(targets.len());
    let mut h_empty = Vec::with_capacity(targets.len());
    for &t in targets {
        h_empty.push(criterion_value(exps, t, &[], cfg.alpha)?);
        states.push(InferenceState {
            target: t,
            psets: Vec::new(),
            cfv: 1.0,
            gain: 0.0,
            best_set: Vec::new(),
            rounds_active: 0,
        });
    }

    let mut rounds = Vec::new();
    let mut budget = states.len();
    let mut k = 1usize;
    while budget > 1 && k <= cfg.max_cardinality {
        let mut order: Vec<usize> = (0..states.len())
            .filter(|&i| states[i].cfv > cfg.optimum_epsilon)
            .collect();
        order.sort_by(|&a, &b| {
            states[b]
                .gain
                .total_cmp(&states[a].gain)
                .then(states[a].target.cmp(&states[b].target))
        });
        order.truncate(budget);
        for &i in &order {
            let state = &mut states[i];
            let outcome = sffs_ba_inner(
                exps,
                state.target,
                state.cfv,
                std::mem::take(&mut state.psets),
                k,
                cfg.delta,
                cfg.alpha,
            )?;
            state.psets = outcome.psets;
            state.cfv = outcome.best_cfv;
            state.gain = outcome.gain;
            if let Some(set) = outcome.best_set {
                state.best_set = set;
            }
            state.rounds_active += 1;
        }
        rounds.push(RoundStats {
            k,
            budget,
            processed: order.len(),
        });
        budget = next_budget(budget, k, cfg);
        k += 1;
    }

    let results = states
        .iter()
        .zip(&h_empty)
        .map(|(state, &h0)| {
            if h0 - state.cfv <= cfg.delta {
                TargetResult {
                    target: state.target,
                    predictors: Vec::new(),
                    cfv: h0,
                    rounds_active: state.rounds_active,
                }
            } else {
                TargetResult {
                    target: state.target,
                    predictors: state.best_set.clone(),
                    cfv: state.cfv,
                    rounds_active: state.rounds_active,
                }
            }
        })
        .collect();
    Ok(InferredNetwork {
        n: exps.n_genes(),
        results,
        rounds,
    })
}

/// Runs one of the comparable strategies over every requested target.
pub fn infer_network(
    method: Method,
    targets: &[usize],
    exps: &ExpressionMatrix,
    cfg: &SearchConfig,
) -> Result<InferredNetwork> {
    cfg.validate()?;
    check_exps(exps)?;
    if targets.is_empty() {
        return Err(parameter("no targets to infer"));
    }
    check_set(exps, targets)?;
    match method {
        Method::SffsBa => network_inference(targets, exps, cfg),
        Method::Sfs => {
            let mut results = Vec::with_capacity(targets.len());
            for &t in targets {
                let (set, v) = sfs_adaptive(exps, t, cfg.alpha, cfg.max_cardinality)?;
                results.push(TargetResult {
                    target: t,
                    predictors: set,
                    cfv: v,
                    rounds_active: 1,
                });
            }
            Ok(InferredNetwork {
                n: exps.n_genes(),
                results,
                rounds: Vec::new(),
            })
        }
        Method::Sffs => {
            let mut results = Vec::with_capacity(targets.len());
            for &t in targets {
                let (set, v) = sffs(exps, t, cfg.max_cardinality, cfg.alpha)?;
                results.push(TargetResult {
                    target: t,
                    predictors: set,
                    cfv: v,
                    rounds_active: 1,
                });
            }
            Ok(InferredNetwork {
                n: exps.n_genes(),
                results,
                rounds: Vec::new(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::DirectedGeneNetwork;
    use crate::pgn::{build_transition_model, TransitionModel, TruthTable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn coin_matrix(seed: u64, n_genes: usize, t_len: usize) -> ExpressionMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ExpressionMatrix::from_rows(
            (0..n_genes)
                .map(|_| (0..t_len).map(|_| rng.gen::<bool>() as u8).collect())
                .collect(),
            seed,
        )
        .unwrap()
    }

    /// Six genes; gene 1 deterministically copies gene 0 one step later,
    /// everything else is a coin-flip source.
    fn copy_link_matrix(seed: u64, t_len: usize) -> ExpressionMatrix {
        let net = DirectedGeneNetwork::from_edges(6, &[(0, 1)], Topology::Er, 0).unwrap();
        let identity = TruthTable::from_fn(1, |p| p == 1).unwrap();
        let coin = TruthTable::constant(0, false).unwrap();
        let mut functions = vec![[coin.clone(), coin.clone(), coin.clone()]; 6];
        functions[1] = [identity.clone(), identity.clone(), identity];
        let model =
            TransitionModel::from_parts(net, functions, vec![[0.98, 0.01, 0.01]; 6], true)
                .unwrap();
        model.simulate(t_len, seed).unwrap()
    }

    /// XOR inputs sit at genes 3 and 4, target is gene 5, genes 0-2 are
    /// noise; input coverage is checked by construction for the used seeds.
    fn xor_network_matrix(seed: u64, t_len: usize) -> ExpressionMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coin = |rng: &mut ChaCha8Rng| -> Vec<u8> {
            (0..t_len).map(|_| rng.gen::<bool>() as u8).collect()
        };
        let rows0 = coin(&mut rng);
        let rows1 = coin(&mut rng);
        let rows2 = coin(&mut rng);
        let x1 = coin(&mut rng);
        let x2 = coin(&mut rng);
        let mut y = vec![rng.gen::<bool>() as u8];
        for t in 0..t_len - 1 {
            y.push(x1[t] ^ x2[t]);
        }
        ExpressionMatrix::from_rows(vec![rows0, rows1, rows2, x1, x2, y], seed).unwrap()
    }

    #[test]
    fn sfs_noop_when_base_is_target_size() {
        let m = coin_matrix(1, 5, 30);
        let (set, v) = sfs(&m, 0, &[2, 3], 2, 1.0).unwrap();
        assert_eq!(set, vec![2, 3]);
        let again = criterion_value(&m, 0, &[2, 3], 1.0).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn sfs_recovers_copy_link() {
        for seed in 0..20 {
            let m = copy_link_matrix(seed, 60);
            let (set, v) = sfs(&m, 1, &[], 1, 1.0).unwrap();
            assert_eq!(set, vec![0], "seed {seed}");
            assert!(v < 0.05, "seed {seed}: value {v}");
        }
    }

    #[test]
    fn sfs_xor_singletons_are_useless() {
        let m = xor_network_matrix(3, 40);
        let (_, v) = sfs(&m, 5, &[], 1, 0.0).unwrap();
        assert!(v > 0.7, "single predictor reached {v}");
    }

    #[test]
    fn sfs_nesting() {
        let m = coin_matrix(7, 8, 40);
        let mut previous: Vec<usize> = Vec::new();
        for size in 1..=4 {
            let (set, _) = sfs(&m, 0, &[], size, 1.0).unwrap();
            assert!(previous.iter().all(|g| set.contains(g)));
            previous = set;
        }
    }

    #[test]
    fn sfs_rejects_infeasible_sizes() {
        let m = coin_matrix(1, 4, 10);
        assert!(sfs(&m, 0, &[], 4, 1.0).is_err());
        assert!(sfs(&m, 0, &[1, 2], 1, 1.0).is_err());
    }

    #[test]
    fn sbs_drops_irrelevant_feature() {
        for seed in 0..10 {
            let m = copy_link_matrix(seed, 60);
            let (set, _) = sbs(&m, 1, &[0, 3], 1.0).unwrap();
            assert_eq!(set, vec![0], "seed {seed}");
        }
    }

    #[test]
    fn sbs_keeps_xor_pair() {
        let m = xor_network_matrix(5, 40);
        let (set, v) = sbs(&m, 5, &[3, 4], 1.0).unwrap();
        assert_eq!(set, vec![3, 4]);
        assert!(v < 0.1);
    }

    #[test]
    fn sbs_singleton_and_empty() {
        let m = coin_matrix(2, 4, 20);
        let (set, _) = sbs(&m, 0, &[2], 1.0).unwrap();
        assert_eq!(set, vec![2]);
        assert!(sbs(&m, 0, &[], 1.0).is_err());
    }

    #[test]
    fn sffs_recovers_copy_link() {
        for seed in 0..10 {
            let m = copy_link_matrix(seed, 60);
            let (set, v) = sffs(&m, 1, 3, 1.0).unwrap();
            assert_eq!(set, vec![0], "seed {seed}");
            assert!(v < 0.05);
        }
    }

    #[test]
    fn sffs_source_resolves_to_single_predictor() {
        // A coin-flip target over many samples has a near-flat criterion
        // profile; near-ties resolve to the smallest cardinality.
        let mut hits = 0;
        for seed in 0..50 {
            let m = coin_matrix(100 + seed, 6, 2001);
            let (set, _) = sffs(&m, 0, 3, 1.0).unwrap();
            if set.len() == 1 {
                hits += 1;
            }
        }
        assert!(hits >= 45, "cardinality-1 resolution in {hits}/50 seeds");
    }

    #[test]
    fn sffs_max_size_one_matches_sfs() {
        let m = coin_matrix(9, 6, 25);
        assert_eq!(sffs(&m, 2, 1, 1.0).unwrap(), sfs(&m, 2, &[], 1, 1.0).unwrap());
    }

    #[test]
    fn sffs_profile_never_beaten_by_plain_greedy() {
        for seed in 0..30 {
            let m = coin_matrix(200 + seed, 7, 30);
            let max = 4;
            let profile = sffs_profile(&m, 0, max, 1.0).unwrap();
            let stored_min = profile
                .iter()
                .skip(1)
                .flatten()
                .map(|(_, v)| *v)
                .fold(f64::INFINITY, f64::min);
            let (_, greedy) = sfs(&m, 0, &[], max, 1.0).unwrap();
            assert!(
                stored_min <= greedy + 1e-12,
                "seed {seed}: {stored_min} vs greedy {greedy}"
            );
        }
    }

    #[test]
    fn inner_k1_returns_ranked_singletons() {
        let m = copy_link_matrix(4, 60);
        let out = sffs_ba_inner(&m, 1, 1.0, Vec::new(), 1, 0.05, 1.0).unwrap();
        // Self-prediction excluded: five singletons for six genes.
        assert_eq!(out.psets.len(), 5);
        assert!(out.psets.iter().all(|s| s.len() == 1));
        assert_eq!(out.psets[0], vec![0]);
        let values: Vec<f64> = out
            .psets
            .iter()
            .map(|s| criterion_value(&m, 1, s, 1.0).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "not ranked: {values:?}");
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(out.best_cfv, min);
        assert_eq!(out.best_set, Some(vec![0]));
        assert!((out.gain - (1.0 - min)).abs() < 1e-12);
    }

    #[test]
    fn inner_k2_recovers_xor_pair() {
        let mut hits = 0;
        for seed in 0..20 {
            let m = xor_network_matrix(seed, 33);
            let out = sffs_ba_inner(&m, 5, 1.0, Vec::new(), 2, 0.05, 1.0).unwrap();
            if out.best_set == Some(vec![3, 4]) {
                hits += 1;
                assert!(out.best_cfv < 0.1, "seed {seed}");
                assert!(out.gain > 0.8, "seed {seed}");
                assert_eq!(out.psets, vec![vec![3, 4]]);
            }
        }
        assert!(hits >= 19, "XOR pair recovered in {hits}/20 seeds");
    }

    #[test]
    fn inner_at_optimum_changes_nothing() {
        let m = coin_matrix(3, 5, 20);
        let incoming = vec![vec![2], vec![3]];
        let out = sffs_ba_inner(&m, 0, 0.0, incoming.clone(), 2, 0.05, 1.0).unwrap();
        assert_eq!(out.best_cfv, 0.0);
        assert_eq!(out.gain, 0.0);
        assert_eq!(out.best_set, None);
        assert_eq!(out.psets, vec![vec![2]]);
    }

    #[test]
    fn scheduler_follows_power_law_budgets() {
        let m = coin_matrix(11, 100, 6);
        let targets: Vec<usize> = (0..100).collect();
        let cfg = SearchConfig::default();
        let inferred = network_inference(&targets, &m, &cfg).unwrap();
        let budgets: Vec<usize> = inferred.rounds.iter().map(|r| r.budget).collect();
        let ks: Vec<usize> = inferred.rounds.iter().map(|r| r.k).collect();
        assert_eq!(budgets, vec![100, 100, 17]);
        assert_eq!(ks, vec![1, 2, 3]);
    }

    #[test]
    fn scheduler_round_mode_rounds_half_up() {
        let m = coin_matrix(11, 100, 6);
        let targets: Vec<usize> = (0..100).collect();
        let cfg = SearchConfig {
            rounding: ScheduleRounding::Round,
            ..SearchConfig::default()
        };
        let inferred = network_inference(&targets, &m, &cfg).unwrap();
        let budgets: Vec<usize> = inferred.rounds.iter().map(|r| r.budget).collect();
        // round(100 * 2^-2.5) = 18, then round(18 * 3^-2.5) = 1 stops.
        assert_eq!(budgets, vec![100, 100, 18]);
    }

    #[test]
    fn scheduler_budgets_never_grow_after_first_round() {
        let m = coin_matrix(13, 40, 8);
        let targets: Vec<usize> = (0..40).collect();
        let cfg = SearchConfig {
            gamma: 1.2,
            ..SearchConfig::default()
        };
        let inferred = network_inference(&targets, &m, &cfg).unwrap();
        for w in inferred.rounds.windows(2) {
            assert!(w[1].budget <= w[0].budget);
        }
    }

    #[test]
    fn single_target_keeps_initialization() {
        let m = coin_matrix(5, 10, 20);
        let inferred = network_inference(&[3], &m, &SearchConfig::default()).unwrap();
        assert!(inferred.rounds.is_empty());
        assert_eq!(inferred.results.len(), 1);
        assert_eq!(inferred.results[0].predictors, Vec::<usize>::new());
        assert_eq!(inferred.results[0].rounds_active, 0);
    }

    #[test]
    fn huge_gamma_stops_after_pair_round() {
        let m = coin_matrix(6, 12, 20);
        let targets: Vec<usize> = (0..12).collect();
        let cfg = SearchConfig {
            gamma: 50.0,
            ..SearchConfig::default()
        };
        let inferred = network_inference(&targets, &m, &cfg).unwrap();
        let ks: Vec<usize> = inferred.rounds.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![1, 2]);
        assert!(inferred.rounds.iter().all(|r| r.budget == 12));
    }

    #[test]
    fn sources_are_reported_without_predictors() {
        // All genes are coins: nothing should clear the gain gate on a
        // reasonably long signal.
        let m = coin_matrix(21, 8, 400);
        let targets: Vec<usize> = (0..8).collect();
        let inferred = network_inference(&targets, &m, &SearchConfig::default()).unwrap();
        let with_preds = inferred.results.iter().filter(|r| !r.predictors.is_empty()).count();
        assert!(with_preds <= 1, "{with_preds}/8 coin targets got predictors");
    }

    #[test]
    fn copy_link_pipeline_end_to_end() {
        for seed in 0..10 {
            let m = copy_link_matrix(seed, 80);
            let targets: Vec<usize> = (0..6).collect();
            let inferred = network_inference(&targets, &m, &SearchConfig::default()).unwrap();
            let r1 = inferred.results.iter().find(|r| r.target == 1).unwrap();
            assert_eq!(r1.predictors, vec![0], "seed {seed}");
        }
    }

    #[test]
    fn xor_target_survives_source_rule() {
        let m = xor_network_matrix(8, 60);
        let targets: Vec<usize> = (0..6).collect();
        let inferred = network_inference(&targets, &m, &SearchConfig::default()).unwrap();
        let r = inferred.results.iter().find(|r| r.target == 5).unwrap();
        assert_eq!(r.predictors, vec![3, 4]);
    }

    #[test]
    fn inference_is_deterministic() {
        let net = crate::netgen::generate_ba(24, 2.0, 3).unwrap();
        let model = build_transition_model(&net, 0.98, 0.01, 0.01, 4).unwrap();
        let m = model.simulate(40, 5).unwrap();
        let targets: Vec<usize> = (0..24).collect();
        let cfg = SearchConfig::default();
        let a = network_inference(&targets, &m, &cfg).unwrap();
        let b = network_inference(&targets, &m, &cfg).unwrap();
        assert_eq!(a, b);
        for method in [Method::Sfs, Method::Sffs] {
            let a = infer_network(method, &targets, &m, &cfg).unwrap();
            let b = infer_network(method, &targets, &m, &cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn config_validation() {
        let bad_gamma = SearchConfig {
            gamma: 0.0,
            ..SearchConfig::default()
        };
        assert!(bad_gamma.validate().is_err());
        let bad_delta = SearchConfig {
            delta: -0.1,
            ..SearchConfig::default()
        };
        assert!(bad_delta.validate().is_err());
        let bad_cap = SearchConfig {
            max_cardinality: 0,
            ..SearchConfig::default()
        };
        assert!(bad_cap.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }

    #[test]
    fn method_parsing_round_trips() {
        for m in [Method::Sfs, Method::Sffs, Method::SffsBa] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("sffs-ba".parse::<Method>().is_ok());
        assert!("bogus".parse::<Method>().is_err());
    }
}
