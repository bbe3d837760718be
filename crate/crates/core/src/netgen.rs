//! Directed ground-truth network topologies.
//!
//! Three generators are provided: uniformly random (ER), preferential
//! attachment (BA, heavy-tailed degree distribution) and rewired ring
//! lattice (WS). All of them produce a [`DirectedGeneNetwork`], i.e. a
//! per-target list of predictor genes, with the average in-degree as the
//! common knob so the three models are comparable at the same complexity.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{format_err, parameter, Error, Result};

/// Tag recording which process produced a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Topology {
    Er,
    Ba,
    Ws,
    /// Networks recovered by a search method rather than generated.
    Inferred,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Topology::Er => "ER",
            Topology::Ba => "BA",
            Topology::Ws => "WS",
            Topology::Inferred => "INFERRED",
        };
        f.write_str(tag)
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ER" => Ok(Topology::Er),
            "BA" => Ok(Topology::Ba),
            "WS" => Ok(Topology::Ws),
            "INFERRED" => Ok(Topology::Inferred),
            other => Err(parameter(format!("unknown topology tag `{other}`"))),
        }
    }
}

/// A directed regulatory graph: for every gene, the ordered list of genes
/// that act as its predictors.
///
/// Invariants enforced on construction: no self-loops, no duplicate
/// predictors within a list, and every index in `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGeneNetwork {
    n: usize,
    predecessors: Vec<Vec<usize>>,
    topology_tag: Topology,
    seed: u64,
}

impl DirectedGeneNetwork {
    /// Builds a network from per-target predecessor lists, validating all
    /// structural invariants.
    pub fn new(
        predecessors: Vec<Vec<usize>>,
        topology_tag: Topology,
        seed: u64,
    ) -> Result<Self> {
        let n = predecessors.len();
        for (target, preds) in predecessors.iter().enumerate() {
            let mut seen = HashSet::with_capacity(preds.len());
            for &p in preds {
                if p >= n {
                    return Err(parameter(format!(
                        "predictor index {p} out of range for n={n}"
                    )));
                }
                if p == target {
                    return Err(parameter(format!("self-loop on gene {target}")));
                }
                if !seen.insert(p) {
                    return Err(parameter(format!(
                        "duplicate predictor {p} for target {target}"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            predecessors,
            topology_tag,
            seed,
        })
    }

    /// Builds a network of `n` genes from an edge list of
    /// `(predictor, target)` pairs.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        topology_tag: Topology,
        seed: u64,
    ) -> Result<Self> {
        let mut preds = vec![Vec::new(); n];
        for &(p, t) in edges {
            if t >= n {
                return Err(parameter(format!("target index {t} out of range for n={n}")));
            }
            preds[t].push(p);
        }
        Self::new(preds, topology_tag, seed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn predecessors(&self, gene: usize) -> &[usize] {
        &self.predecessors[gene]
    }

    pub fn topology(&self) -> Topology {
        self.topology_tag
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn edge_count(&self) -> usize {
        self.predecessors.iter().map(Vec::len).sum()
    }

    /// All edges as `(predictor, target)` pairs, grouped by target.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.predecessors
            .iter()
            .enumerate()
            .flat_map(|(t, preds)| preds.iter().map(move |&p| (p, t)))
    }

    /// Writes the network in the edge-list text format.
    ///
    /// One header line `# n=<N> topology=<TAG> seed=<SEED>` followed by one
    /// `predictor<TAB>target` line per edge, targets in ascending order.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# n={} topology={} seed={}", self.n, self.topology_tag, self.seed)?;
        for (p, t) in self.edges() {
            writeln!(w, "{p}\t{t}")?;
        }
        Ok(())
    }

    /// Reads a network from the edge-list text format, re-validating all
    /// invariants. Files produced by [`Self::write_to`] round-trip exactly.
    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header = lines
            .next()
            .ok_or_else(|| format_err("empty edge-list file"))??;
        let (n, tag, seed) = parse_network_header(&header)?;
        let mut preds = vec![Vec::new(); n];
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split('\t');
            let p: usize = parse_field(parts.next(), "predictor", &line)?;
            let t: usize = parse_field(parts.next(), "target", &line)?;
            if parts.next().is_some() {
                return Err(format_err(format!("trailing fields in edge line `{line}`")));
            }
            if t >= n {
                return Err(format_err(format!("target {t} out of range in `{line}`")));
            }
            preds[t].push(p);
        }
        Self::new(preds, tag, seed).map_err(|e| format_err(e.to_string()))
    }

    pub fn to_string_edges(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

fn parse_field<T: FromStr>(field: Option<&str>, name: &str, line: &str) -> Result<T> {
    field
        .ok_or_else(|| format_err(format!("missing {name} in `{line}`")))?
        .parse()
        .map_err(|_| format_err(format!("bad {name} in `{line}`")))
}

fn parse_network_header(header: &str) -> Result<(usize, Topology, u64)> {
    let body = header
        .strip_prefix("# ")
        .ok_or_else(|| format_err(format!("bad header `{header}`")))?;
    let mut n = None;
    let mut tag = None;
    let mut seed = None;
    for part in body.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format_err(format!("bad header field `{part}`")))?;
        match key {
            "n" => n = Some(value.parse().map_err(|_| format_err("bad n in header"))?),
            "topology" => tag = Some(value.parse()?),
            "seed" => seed = Some(value.parse().map_err(|_| format_err("bad seed in header"))?),
            other => return Err(format_err(format!("unknown header key `{other}`"))),
        }
    }
    match (n, tag, seed) {
        (Some(n), Some(tag), Some(seed)) => Ok((n, tag, seed)),
        _ => Err(format_err(format!("incomplete header `{header}`"))),
    }
}

/// In- and out-degree tallies of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHistogram {
    /// degree -> number of genes with that in-degree
    pub in_degrees: BTreeMap<usize, usize>,
    /// degree -> number of genes with that out-degree
    pub out_degrees: BTreeMap<usize, usize>,
    pub mean_in_degree: f64,
}

/// Tallies exact in/out degree distributions.
pub fn degree_histogram(net: &DirectedGeneNetwork) -> DegreeHistogram {
    let n = net.n();
    let mut out_deg = vec![0usize; n];
    let mut in_hist = BTreeMap::new();
    for gene in 0..n {
        let preds = net.predecessors(gene);
        *in_hist.entry(preds.len()).or_insert(0) += 1;
        for &p in preds {
            out_deg[p] += 1;
        }
    }
    let mut out_hist = BTreeMap::new();
    for d in out_deg {
        *out_hist.entry(d).or_insert(0) += 1;
    }
    DegreeHistogram {
        in_degrees: in_hist,
        out_degrees: out_hist,
        mean_in_degree: net.edge_count() as f64 / n as f64,
    }
}

fn check_common(n: usize, avg_k: f64) -> Result<()> {
    if n < 2 {
        return Err(parameter(format!("need at least 2 genes, got n={n}")));
    }
    if !avg_k.is_finite() || avg_k <= 0.0 || avg_k > (n - 1) as f64 {
        return Err(parameter(format!(
            "avg_k must be in (0, n-1], got {avg_k} for n={n}"
        )));
    }
    Ok(())
}

/// Uniformly random directed network: every ordered pair `(j -> i)` with
/// `j != i` is an edge independently with probability `avg_k / (n - 1)`, so
/// the expected mean in-degree equals `avg_k`.
pub fn generate_er(n: usize, avg_k: f64, seed: u64) -> Result<DirectedGeneNetwork> {
    check_common(n, avg_k)?;
    let p = avg_k / (n - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut preds = vec![Vec::new(); n];
    for (target, target_preds) in preds.iter_mut().enumerate() {
        for source in 0..n {
            if source != target && rng.gen::<f64>() < p {
                target_preds.push(source);
            }
        }
    }
    DirectedGeneNetwork::new(preds, Topology::Er, seed)
}

/// Scale-free network grown by preferential attachment.
///
/// Starts from `m = round(avg_k)` isolated nodes; each arriving node attaches
/// `m` undirected links to distinct existing nodes chosen proportionally to
/// their current degree (uniformly while no edges exist yet). Each undirected
/// link is then oriented by a fair coin flip, which makes the expected mean
/// in-degree approach `avg_k` for `n >> m`.
pub fn generate_ba(n: usize, avg_k: f64, seed: u64) -> Result<DirectedGeneNetwork> {
    check_common(n, avg_k)?;
    if avg_k < 1.0 {
        return Err(parameter(format!("avg_k must be >= 1 for BA, got {avg_k}")));
    }
    let m = (avg_k.round() as usize).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut undirected: Vec<(usize, usize)> = Vec::with_capacity(m * n);
    // Multiset of edge endpoints: sampling uniformly from it is sampling
    // nodes proportionally to degree.
    let mut urn: Vec<usize> = Vec::with_capacity(2 * m * n);
    for v in m..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        if urn.is_empty() {
            // First arrival: no degrees to prefer, pick uniformly.
            let mut existing: Vec<usize> = (0..v).collect();
            existing.shuffle(&mut rng);
            targets.extend(existing.into_iter().take(m));
        } else {
            let mut chosen = HashSet::with_capacity(m);
            while chosen.len() < m {
                let candidate = if chosen.len() < v {
                    urn[rng.gen_range(0..urn.len())]
                } else {
                    break;
                };
                if chosen.insert(candidate) {
                    targets.push(candidate);
                }
            }
            // Degenerate fallback: if rejection sampling stalls because all
            // mass sits on already-chosen nodes, fill uniformly.
            if targets.len() < m {
                for u in 0..v {
                    if targets.len() == m {
                        break;
                    }
                    if !chosen.contains(&u) {
                        chosen.insert(u);
                        targets.push(u);
                    }
                }
            }
        }
        for t in targets {
            undirected.push((v, t));
            urn.push(v);
            urn.push(t);
        }
    }
    orient(n, &undirected, Topology::Ba, seed, &mut rng)
}

/// Small-world network: a directed ring lattice perturbed by random rewiring.
///
/// Every node is linked to its `round(avg_k)` nearest clockwise neighbours,
/// so the mean in-degree after orientation equals `round(avg_k)`. Each
/// lattice link is then, with probability `rewire_p`, replaced by a fresh
/// uniformly random pair, avoiding self-loops and duplicate links; at
/// `rewire_p = 1` the result is indistinguishable from a uniform random
/// graph with the same edge count.
pub fn generate_ws(n: usize, avg_k: f64, rewire_p: f64, seed: u64) -> Result<DirectedGeneNetwork> {
    check_common(n, avg_k)?;
    if avg_k < 1.0 {
        return Err(parameter(format!("avg_k must be >= 1 for WS, got {avg_k}")));
    }
    if !(0.0..=1.0).contains(&rewire_p) {
        return Err(parameter(format!("rewire_p must be in [0, 1], got {rewire_p}")));
    }
    let c = (avg_k.round() as usize).max(1);
    if 2 * c >= n {
        return Err(parameter(format!(
            "ring lattice needs n > 2*round(avg_k), got n={n} avg_k={avg_k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * c);
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * c);
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    for i in 0..n {
        for j in 1..=c {
            let e = (i, (i + j) % n);
            edges.push(e);
            present.insert(key(e.0, e.1));
        }
    }
    for edge in &mut edges {
        if rng.gen::<f64>() < rewire_p {
            present.remove(&key(edge.0, edge.1));
            let fresh = loop {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v && !present.contains(&key(u, v)) {
                    break (u, v);
                }
            };
            present.insert(key(fresh.0, fresh.1));
            *edge = fresh;
        }
    }
    orient(n, &edges, Topology::Ws, seed, &mut rng)
}

/// Assigns a direction to every undirected link by a fair coin flip and
/// canonicalizes predecessor lists in ascending order.
fn orient(
    n: usize,
    undirected: &[(usize, usize)],
    tag: Topology,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<DirectedGeneNetwork> {
    let mut preds = vec![Vec::new(); n];
    for &(a, b) in undirected {
        if rng.gen::<bool>() {
            preds[b].push(a);
        } else {
            preds[a].push(b);
        }
    }
    for list in &mut preds {
        list.sort_unstable();
    }
    DirectedGeneNetwork::new(preds, tag, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn er_two_nodes_probability_one() {
        let net = generate_er(2, 1.0, 7).unwrap();
        assert_eq!(net.predecessors(0), &[1]);
        assert_eq!(net.predecessors(1), &[0]);
        assert_eq!(net.edge_count(), 2);
    }

    #[test]
    fn er_rejects_bad_parameters() {
        assert!(generate_er(100, 0.0, 1).is_err());
        assert!(generate_er(1, 0.5, 1).is_err());
        assert!(generate_er(100, 100.0, 1).is_err());
        assert!(generate_er(100, f64::NAN, 1).is_err());
    }

    #[test]
    fn er_mean_in_degree_near_avg_k() {
        let mut total = 0.0;
        for seed in 0..50 {
            let net = generate_er(100, 2.0, seed).unwrap();
            total += degree_histogram(&net).mean_in_degree;
        }
        let mean = total / 50.0;
        assert!((1.8..=2.2).contains(&mean), "mean in-degree {mean}");
    }

    #[test]
    fn er_mean_within_three_sigma() {
        let n = 100usize;
        let avg_k = 3.0;
        let mut total = 0.0;
        for seed in 0..30 {
            let net = generate_er(n, avg_k, 1000 + seed).unwrap();
            total += degree_histogram(&net).mean_in_degree;
        }
        let mean = total / 30.0;
        assert!((mean - avg_k).abs() <= 3.0 * (avg_k / n as f64).sqrt());
    }

    #[test]
    fn ba_three_nodes_two_edges() {
        for seed in 0..10 {
            let net = generate_ba(3, 1.0, seed).unwrap();
            assert_eq!(net.edge_count(), 2);
        }
    }

    #[test]
    fn ba_hubs_beat_er_max_degree() {
        let total_degrees = |net: &DirectedGeneNetwork| {
            let mut deg = vec![0usize; net.n()];
            for (p, t) in net.edges() {
                deg[p] += 1;
                deg[t] += 1;
            }
            deg
        };
        let mut wins = 0;
        for seed in 0..50 {
            let ba = generate_ba(100, 5.0, seed).unwrap();
            let er = generate_er(100, 5.0, seed).unwrap();
            let ba_max = total_degrees(&ba).into_iter().max().unwrap();
            let er_max = total_degrees(&er).into_iter().max().unwrap();
            if ba_max > er_max {
                wins += 1;
            }
        }
        assert!(wins >= 40, "BA max degree won only {wins}/50 paired seeds");
    }

    #[test]
    fn ba_hub_exists_for_large_n() {
        let mut majority = 0;
        for seed in 0..10 {
            let net = generate_ba(500, 2.0, seed).unwrap();
            let mut deg = vec![0usize; 500];
            for (p, t) in net.edges() {
                deg[p] += 1;
                deg[t] += 1;
            }
            let mean = deg.iter().sum::<usize>() as f64 / 500.0;
            if deg.iter().any(|&d| d as f64 >= 3.0 * mean) {
                majority += 1;
            }
        }
        assert!(majority > 5, "hub found in only {majority}/10 seeds");
    }

    #[test]
    fn ba_tail_slope_is_power_law_like() {
        // Histograms pooled over 20 seeds before fitting, so the far tail
        // is not dominated by single-count noise bins.
        let m = 2usize;
        let mut pooled: BTreeMap<usize, usize> = BTreeMap::new();
        for seed in 0..20 {
            let net = generate_ba(1000, 2.0, seed).unwrap();
            let mut deg = vec![0usize; 1000];
            for (p, t) in net.edges() {
                deg[p] += 1;
                deg[t] += 1;
            }
            for d in deg {
                *pooled.entry(d).or_insert(0usize) += 1;
            }
        }
        let points: Vec<(f64, f64)> = pooled
            .iter()
            .filter(|(&d, &c)| d >= m && c > 0)
            .map(|(&d, &c)| ((d as f64).log10(), (c as f64).log10()))
            .collect();
        let slope = least_squares_slope(&points);
        assert!((-3.5..=-2.0).contains(&slope), "tail slope {slope}");
    }

    fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn ws_no_rewire_is_exact_lattice() {
        // round(avg_k) = 1: pure ring, every node one incoming and one
        // outgoing ring link in the undirected sense.
        let net = generate_ws(10, 1.0, 0.0, 3).unwrap();
        assert_eq!(net.edge_count(), 10);
        let mut deg = [0usize; 10];
        for (p, t) in net.edges() {
            assert!((t + 10 - p) % 10 == 1 || (p + 10 - t) % 10 == 1);
            deg[p] += 1;
            deg[t] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));

        // round(avg_k) = 2: each node linked to the two nearest clockwise
        // neighbours, total degree 4.
        let net = generate_ws(10, 2.0, 0.0, 3).unwrap();
        assert_eq!(net.edge_count(), 20);
        let mut deg = [0usize; 10];
        for (p, t) in net.edges() {
            deg[p] += 1;
            deg[t] += 1;
        }
        assert!(deg.iter().all(|&d| d == 4));
        assert!((degree_histogram(&net).mean_in_degree - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ws_rejects_bad_rewire_p() {
        assert!(generate_ws(10, 2.0, 1.5, 1).is_err());
        assert!(generate_ws(10, 2.0, -0.1, 1).is_err());
    }

    #[test]
    fn ws_full_rewire_matches_er_by_chi_square() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};

        let mut ws_hist: BTreeMap<usize, usize> = BTreeMap::new();
        let mut er_hist: BTreeMap<usize, usize> = BTreeMap::new();
        for seed in 0..50 {
            let ws = generate_ws(100, 4.0, 1.0, 2000 + seed).unwrap();
            for d in degree_histogram(&ws).in_degrees {
                *ws_hist.entry(d.0).or_insert(0) += d.1;
            }
            let er = generate_er(100, 4.0, 4000 + seed).unwrap();
            for d in degree_histogram(&er).in_degrees {
                *er_hist.entry(d.0).or_insert(0) += d.1;
            }
        }
        // Two-sample chi-square on pooled in-degree histograms, merging the
        // sparse tail so every expected count is at least 5.
        let max_deg = *ws_hist.keys().chain(er_hist.keys()).max().unwrap();
        let mut ws_counts = Vec::new();
        let mut er_counts = Vec::new();
        let mut ws_acc = 0.0;
        let mut er_acc = 0.0;
        for d in 0..=max_deg {
            ws_acc += *ws_hist.get(&d).unwrap_or(&0) as f64;
            er_acc += *er_hist.get(&d).unwrap_or(&0) as f64;
            if ws_acc + er_acc >= 20.0 {
                ws_counts.push(ws_acc);
                er_counts.push(er_acc);
                ws_acc = 0.0;
                er_acc = 0.0;
            }
        }
        if ws_acc + er_acc > 0.0 {
            ws_counts.push(ws_acc);
            er_counts.push(er_acc);
        }
        let ws_total: f64 = ws_counts.iter().sum();
        let er_total: f64 = er_counts.iter().sum();
        let mut stat = 0.0;
        for (w, e) in ws_counts.iter().zip(&er_counts) {
            let pooled = (w + e) / (ws_total + er_total);
            let exp_w = pooled * ws_total;
            let exp_e = pooled * er_total;
            stat += (w - exp_w).powi(2) / exp_w + (e - exp_e).powi(2) / exp_e;
        }
        let df = (ws_counts.len() - 1) as f64;
        let critical = ChiSquared::new(df).unwrap().inverse_cdf(0.95);
        assert!(
            stat <= critical,
            "chi-square {stat:.2} exceeds critical {critical:.2} (df={df})"
        );
    }

    #[test]
    fn histogram_no_edges() {
        let net = DirectedGeneNetwork::new(vec![Vec::new(); 5], Topology::Er, 0).unwrap();
        let h = degree_histogram(&net);
        assert_eq!(h.in_degrees, BTreeMap::from([(0, 5)]));
        assert_eq!(h.mean_in_degree, 0.0);
    }

    #[test]
    fn histogram_three_gene_chain() {
        let net =
            DirectedGeneNetwork::from_edges(3, &[(0, 1), (1, 2)], Topology::Er, 0).unwrap();
        let h = degree_histogram(&net);
        assert_eq!(h.in_degrees, BTreeMap::from([(0, 1), (1, 2)]));
        assert_eq!(h.out_degrees, BTreeMap::from([(0, 1), (1, 2)]));
    }

    #[test]
    fn histogram_mean_is_exact_edge_ratio() {
        let net = generate_er(100, 3.0, 11).unwrap();
        let recount: usize = (0..100).map(|g| net.predecessors(g).len()).sum();
        let h = degree_histogram(&net);
        assert_eq!(h.mean_in_degree, recount as f64 / 100.0);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(generate_er(40, 2.0, 9).unwrap(), generate_er(40, 2.0, 9).unwrap());
        assert_eq!(generate_ba(40, 2.0, 9).unwrap(), generate_ba(40, 2.0, 9).unwrap());
        assert_eq!(
            generate_ws(40, 2.0, 0.3, 9).unwrap(),
            generate_ws(40, 2.0, 0.3, 9).unwrap()
        );
    }

    #[test]
    fn network_constructor_rejects_invalid() {
        assert!(DirectedGeneNetwork::new(vec![vec![0]], Topology::Er, 0).is_err());
        assert!(DirectedGeneNetwork::new(vec![vec![1], vec![]], Topology::Er, 0).is_ok());
        assert!(DirectedGeneNetwork::new(vec![vec![2], vec![]], Topology::Er, 0).is_err());
        assert!(DirectedGeneNetwork::new(vec![vec![1, 1], vec![]], Topology::Er, 0).is_err());
    }

    #[test]
    fn edge_list_round_trips_bit_exactly() {
        let net = generate_ba(30, 2.0, 5).unwrap();
        let text = net.to_string_edges();
        let back = DirectedGeneNetwork::read_from(text.as_bytes()).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.to_string_edges(), text);
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(DirectedGeneNetwork::read_from("".as_bytes()).is_err());
        assert!(DirectedGeneNetwork::read_from("# n=2 topology=XX seed=0\n".as_bytes()).is_err());
        assert!(
            DirectedGeneNetwork::read_from("# n=2 topology=ER seed=0\n5\t0\n".as_bytes()).is_err()
        );
        assert!(
            DirectedGeneNetwork::read_from("# n=2 topology=ER seed=0\n0\t0\n".as_bytes()).is_err()
        );
        assert!(DirectedGeneNetwork::read_from("n=2 topology=ER seed=0\n".as_bytes()).is_err());
    }

    fn check_invariants(net: &DirectedGeneNetwork) {
        for g in 0..net.n() {
            let preds = net.predecessors(g);
            let mut seen = HashSet::new();
            for &p in preds {
                assert!(p < net.n());
                assert_ne!(p, g);
                assert!(seen.insert(p));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn generated_networks_satisfy_invariants(
            n in 3usize..40,
            k_frac in 0.05f64..0.9,
            rewire in 0.0f64..1.0,
            seed in any::<u64>(),
        ) {
            let avg_k = (1.0 + k_frac * ((n - 2) as f64)).min((n - 1) as f64);
            let er = generate_er(n, avg_k, seed).unwrap();
            check_invariants(&er);
            let ba = generate_ba(n, avg_k, seed).unwrap();
            check_invariants(&ba);
            let ws_k = avg_k.min(((n - 1) / 2) as f64).max(1.0);
            let ws = generate_ws(n, ws_k, rewire, seed).unwrap();
            check_invariants(&ws);
            prop_assert_eq!(ws.edge_count(), n * (ws_k.round() as usize).max(1));
        }

        #[test]
        fn histogram_counts_sum_to_n(n in 2usize..30, seed in any::<u64>()) {
            let net = generate_er(n, 1.5f64.min((n - 1) as f64), seed).unwrap();
            let h = degree_histogram(&net);
            prop_assert_eq!(h.in_degrees.values().sum::<usize>(), n);
            prop_assert_eq!(h.out_degrees.values().sum::<usize>(), n);
            prop_assert!((h.mean_in_degree - net.edge_count() as f64 / n as f64).abs() < 1e-12);
        }
    }
}
