//! Probabilistic genetic network model and simulator.
//!
//! Each gene carries three Boolean transition functions over its predictors;
//! at every time step one of them is selected at random per gene (with fixed
//! probabilities summing to one) and evaluated on the previous state. The
//! resulting dynamics form a homogeneous Markov chain over binary network
//! states: every state stays reachable as long as all selection
//! probabilities are positive, and the chain is quasi-deterministic when the
//! primary function dominates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{parameter, Result};
use crate::expression::ExpressionMatrix;
use crate::netgen::DirectedGeneNetwork;

/// Largest predictor count for which truth tables are materialized; above
/// this the table is evaluated lazily from a seed so hub genes stay cheap.
const DENSE_ARITY_LIMIT: usize = 16;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// A Boolean function of `arity` inputs, indexed by the integer encoding of
/// the input pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    arity: usize,
    repr: TableRepr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TableRepr {
    /// Bit-packed output column, one bit per input pattern.
    Dense(Vec<u64>),
    /// Output bits derived from a seed on demand.
    Seeded(u64),
}

impl TruthTable {
    /// Draws a uniformly random Boolean function of the given arity.
    pub fn random(arity: usize, rng: &mut impl Rng) -> Result<Self> {
        if arity > 63 {
            return Err(parameter(format!("truth table arity {arity} too large")));
        }
        if arity <= DENSE_ARITY_LIMIT {
            let n_bits = 1usize << arity;
            let words = n_bits.div_ceil(64);
            let bits = (0..words).map(|_| rng.gen::<u64>()).collect();
            Ok(Self {
                arity,
                repr: TableRepr::Dense(bits),
            })
        } else {
            Ok(Self {
                arity,
                repr: TableRepr::Seeded(rng.gen()),
            })
        }
    }

    /// Materializes a function from a closure over pattern encodings.
    pub fn from_fn(arity: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        if arity > DENSE_ARITY_LIMIT {
            return Err(parameter(format!(
                "explicit tables limited to arity {DENSE_ARITY_LIMIT}, got {arity}"
            )));
        }
        let n_bits = 1usize << arity;
        let mut bits = vec![0u64; n_bits.div_ceil(64)];
        for pattern in 0..n_bits as u64 {
            if f(pattern) {
                bits[(pattern / 64) as usize] |= 1 << (pattern % 64);
            }
        }
        Ok(Self {
            arity,
            repr: TableRepr::Dense(bits),
        })
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of entries in the (possibly virtual) output column.
    pub fn num_entries(&self) -> u128 {
        1u128 << self.arity
    }

    pub fn eval(&self, pattern: u64) -> u8 {
        debug_assert!(self.arity == 64 || pattern < (1u64 << self.arity));
        match &self.repr {
            TableRepr::Dense(bits) => {
                ((bits[(pattern / 64) as usize] >> (pattern % 64)) & 1) as u8
            }
            TableRepr::Seeded(seed) => (splitmix64(seed ^ pattern) & 1) as u8,
        }
    }
}

/// The joint expression values of all genes at one time instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkState {
    pub bits: Vec<u8>,
}

impl NetworkState {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(parameter("state bits must be 0 or 1"));
        }
        Ok(Self { bits })
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Self {
            bits: (0..n).map(|_| rng.gen::<bool>() as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// A complete transition model: one function triple and one selection
/// probability triple per gene, over a fixed predictor topology.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    network: DirectedGeneNetwork,
    functions: Vec<[TruthTable; 3]>,
    selection_probs: Vec<[f64; 3]>,
    source_uniform: bool,
}

fn validate_probs(c: [f64; 3]) -> Result<()> {
    if c.iter().any(|&p| p <= 0.0 || !p.is_finite()) {
        return Err(parameter(format!(
            "selection probabilities must all be positive, got {c:?}"
        )));
    }
    let sum: f64 = c.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(parameter(format!(
            "selection probabilities must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

/// Draws a transition model over `net`: three uniformly random truth tables
/// per gene (a single output bit for genes without predictors) and the same
/// selection probability triple everywhere.
///
/// Genes without predictors default to a fair coin per step
/// (`source_uniform`); see [`TransitionModel::with_source_uniform`].
pub fn build_transition_model(
    net: &DirectedGeneNetwork,
    c1: f64,
    c2: f64,
    c3: f64,
    seed: u64,
) -> Result<TransitionModel> {
    let c = [c1, c2, c3];
    validate_probs(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut functions = Vec::with_capacity(net.n());
    for gene in 0..net.n() {
        let d = net.predecessors(gene).len();
        functions.push([
            TruthTable::random(d, &mut rng)?,
            TruthTable::random(d, &mut rng)?,
            TruthTable::random(d, &mut rng)?,
        ]);
    }
    Ok(TransitionModel {
        network: net.clone(),
        functions,
        selection_probs: vec![c; net.n()],
        source_uniform: true,
    })
}

impl TransitionModel {
    /// Assembles a model from explicit parts, validating that every table
    /// arity matches its gene's predictor count.
    pub fn from_parts(
        network: DirectedGeneNetwork,
        functions: Vec<[TruthTable; 3]>,
        selection_probs: Vec<[f64; 3]>,
        source_uniform: bool,
    ) -> Result<Self> {
        if functions.len() != network.n() || selection_probs.len() != network.n() {
            return Err(parameter("functions and probabilities must cover every gene"));
        }
        for (gene, triple) in functions.iter().enumerate() {
            let d = network.predecessors(gene).len();
            for table in triple {
                if table.arity() != d {
                    return Err(parameter(format!(
                        "gene {gene} table arity {} does not match {d} predictors",
                        table.arity()
                    )));
                }
            }
        }
        for &c in &selection_probs {
            validate_probs(c)?;
        }
        Ok(Self {
            network,
            functions,
            selection_probs,
            source_uniform,
        })
    }

    /// Toggles whether predictor-less genes flip a fair coin each step
    /// instead of evaluating their constant functions. On by default, so
    /// sources show the random temporal behaviour that separates them from
    /// regulated genes.
    pub fn with_source_uniform(mut self, on: bool) -> Self {
        self.source_uniform = on;
        self
    }

    pub fn network(&self) -> &DirectedGeneNetwork {
        &self.network
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    pub fn functions(&self, gene: usize) -> &[TruthTable; 3] {
        &self.functions[gene]
    }

    pub fn selection_probs(&self, gene: usize) -> [f64; 3] {
        self.selection_probs[gene]
    }

    pub fn source_uniform(&self) -> bool {
        self.source_uniform
    }

    fn pattern_for(&self, gene: usize, state: &NetworkState) -> u64 {
        let mut pattern = 0u64;
        for (j, &p) in self.network.predecessors(gene).iter().enumerate() {
            pattern |= (state.bits[p] as u64) << j;
        }
        pattern
    }

    /// Advances the state by one time step: independently per gene, selects
    /// one of the three functions according to the selection probabilities
    /// and evaluates it on the current predictor values.
    pub fn step(&self, state: &NetworkState, rng: &mut impl Rng) -> NetworkState {
        debug_assert_eq!(state.len(), self.n());
        let mut next = Vec::with_capacity(self.n());
        for gene in 0..self.n() {
            let d = self.network.predecessors(gene).len();
            if d == 0 && self.source_uniform {
                next.push(rng.gen::<bool>() as u8);
                continue;
            }
            let [c1, c2, _] = self.selection_probs[gene];
            let u: f64 = rng.gen();
            let slot = if u < c1 {
                0
            } else if u < c1 + c2 {
                1
            } else {
                2
            };
            let pattern = self.pattern_for(gene, state);
            next.push(self.functions[gene][slot].eval(pattern));
        }
        NetworkState { bits: next }
    }

    /// The noise-free skeleton transition: every gene evaluates its primary
    /// function. Coin-flip sources have no skeleton, so this is only
    /// meaningful when `source_uniform` is off or no sources exist.
    pub fn step_deterministic(&self, state: &NetworkState) -> NetworkState {
        let bits = (0..self.n())
            .map(|gene| self.functions[gene][0].eval(self.pattern_for(gene, state)))
            .collect();
        NetworkState { bits }
    }

    /// Simulates `n_times` observed time instants from a uniformly random
    /// initial state. Column `t` of the result is the state at time `t`;
    /// the output is a deterministic function of `(model, n_times, seed)`.
    pub fn simulate(&self, n_times: usize, seed: u64) -> Result<ExpressionMatrix> {
        if n_times < 2 {
            return Err(parameter(format!(
                "need at least 2 time points for transition pairs, got {n_times}"
            )));
        }
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = NetworkState::random(n, &mut rng);
        let mut values = vec![0u8; n * n_times];
        for t in 0..n_times {
            if t > 0 {
                state = self.step(&state, &mut rng);
            }
            for g in 0..n {
                values[g * n_times + t] = state.bits[g];
            }
        }
        Ok(ExpressionMatrix::from_flat(values, n, n_times, seed))
    }
}
