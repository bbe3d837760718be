//! Sweep execution: one simulated network instance per grid cell, every
//! method scored on the identical expression matrix, rows emitted in a
//! deterministic order.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use grn_core::metrics::score;
use grn_core::netgen::{generate_ba, generate_er, generate_ws, DirectedGeneNetwork};
use grn_core::pgn::build_transition_model;
use grn_core::search::infer_network;
use grn_core::{ExpressionMatrix, Method, Topology};

use crate::config::ExperimentConfig;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Stable, platform-independent combination of seed material.
fn mix(h: u64, v: u64) -> u64 {
    splitmix64(h ^ v.rotate_left(17))
}

/// Seed of one grid cell, a pure function of the base seed and the cell
/// coordinates, so any sub-grid of a sweep reproduces the exact same
/// instances as the full grid.
pub fn cell_seed(base_seed: u64, topology: Topology, avg_k: f64, signal_size: usize, run: u64) -> u64 {
    let mut h = splitmix64(base_seed);
    h = mix(h, topology as u64 + 1);
    h = mix(h, avg_k.to_bits());
    h = mix(h, signal_size as u64);
    h = mix(h, run);
    h
}

/// Sub-stream seeds derived from a cell seed for the three random stages.
pub fn stage_seeds(cell: u64) -> (u64, u64, u64) {
    (mix(cell, 1), mix(cell, 2), mix(cell, 3))
}

/// One line of the benchmark result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub topology: Topology,
    pub n: usize,
    pub avg_k: f64,
    pub signal_size: usize,
    pub method: Method,
    pub seed: u64,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub ppv: f64,
    pub sensitivity: f64,
    pub similarity: f64,
}

/// A result row plus bookkeeping that stays out of the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub row: ResultRow,
    pub run: u64,
    pub matrix_checksum: u64,
}

fn generate(topology: Topology, cfg: &ExperimentConfig, avg_k: f64, seed: u64) -> Result<DirectedGeneNetwork> {
    let net = match topology {
        Topology::Er => generate_er(cfg.n, avg_k, seed)?,
        Topology::Ba => generate_ba(cfg.n, avg_k, seed)?,
        Topology::Ws => generate_ws(cfg.n, avg_k, cfg.ws_rewire_p, seed)?,
        Topology::Inferred => bail!("INFERRED is not a generator topology"),
    };
    Ok(net)
}

/// Builds the ground truth and expression matrix of one cell.
pub fn simulate_cell(
    cfg: &ExperimentConfig,
    topology: Topology,
    avg_k: f64,
    signal_size: usize,
    run: u64,
) -> Result<(DirectedGeneNetwork, ExpressionMatrix, u64)> {
    let cell = cell_seed(cfg.base_seed, topology, avg_k, signal_size, run);
    let (net_seed, model_seed, sim_seed) = stage_seeds(cell);
    let net = generate(topology, cfg, avg_k, net_seed)?;
    let model = build_transition_model(&net, cfg.c1, cfg.c2, cfg.c3, model_seed)?
        .with_source_uniform(cfg.source_uniform);
    let exps = model.simulate(signal_size, sim_seed)?;
    Ok((net, exps, cell))
}

/// Runs the whole sweep. Cells execute in parallel; all methods within a
/// cell consume the identical expression matrix, and the returned records
/// are sorted into a deterministic order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let search_cfg = cfg.search_config();
    let mut cells = Vec::new();
    for &topology in &cfg.topologies {
        for &avg_k in &cfg.avg_k_values {
            for &signal_size in &cfg.signal_sizes {
                for run in 0..cfg.runs {
                    cells.push((topology, avg_k, signal_size, run));
                }
            }
        }
    }
    let records: Result<Vec<Vec<RunRecord>>> = cells
        .par_iter()
        .map(|&(topology, avg_k, signal_size, run)| {
            let (net, exps, cell) = simulate_cell(cfg, topology, avg_k, signal_size, run)?;
            let checksum = exps.checksum();
            let targets: Vec<usize> = (0..cfg.n).collect();
            let mut out = Vec::with_capacity(cfg.methods.len());
            for &method in &cfg.methods {
                let inferred = infer_network(method, &targets, &exps, &search_cfg)?;
                let report = score(&net, &inferred)?;
                out.push(RunRecord {
                    row: ResultRow {
                        topology,
                        n: cfg.n,
                        avg_k,
                        signal_size,
                        method,
                        seed: cell,
                        tp: report.tp,
                        fp: report.fp,
                        fn_: report.fn_,
                        ppv: report.ppv,
                        sensitivity: report.sensitivity,
                        similarity: report.similarity,
                    },
                    run,
                    matrix_checksum: checksum,
                });
            }
            Ok(out)
        })
        .collect();
    let mut records: Vec<RunRecord> = records?.into_iter().flatten().collect();
    records.sort_by(|a, b| {
        (a.row.topology, a.row.avg_k.to_bits(), a.row.signal_size, a.row.method, a.run).cmp(&(
            b.row.topology,
            b.row.avg_k.to_bits(),
            b.row.signal_size,
            b.row.method,
            b.run,
        ))
    });
    Ok(records)
}

pub const CSV_HEADER: &str =
    "topology,n,avg_k,signal_size,method,seed,tp,fp,fn,ppv,sensitivity,similarity";

/// Writes the result table; ratio columns are rounded to six decimals and
/// the byte output is a pure function of the rows.
pub fn write_csv<W: Write>(rows: &[ResultRow], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6}",
            r.topology,
            r.n,
            r.avg_k,
            r.signal_size,
            r.method,
            r.seed,
            r.tp,
            r.fp,
            r.fn_,
            r.ppv,
            r.sensitivity,
            r.similarity
        )?;
    }
    Ok(())
}

pub fn rows_to_csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// Reads a result table written by [`write_csv`].
pub fn read_csv<R: Read>(r: R) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    {
        let headers = reader.headers().context("reading CSV header")?;
        let expected: Vec<&str> = CSV_HEADER.split(',').collect();
        if headers.iter().collect::<Vec<_>>() != expected {
            bail!("unexpected CSV header: {headers:?}");
        }
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| -> Result<&str> {
            record
                .get(i)
                .with_context(|| format!("missing field {i} in row {record:?}"))
        };
        rows.push(ResultRow {
            topology: field(0)?.parse()?,
            n: field(1)?.parse()?,
            avg_k: field(2)?.parse()?,
            signal_size: field(3)?.parse()?,
            method: field(4)?.parse()?,
            seed: field(5)?.parse()?,
            tp: field(6)?.parse()?,
            fp: field(7)?.parse()?,
            fn_: field(8)?.parse()?,
            ppv: field(9)?.parse()?,
            sensitivity: field(10)?.parse()?,
            similarity: field(11)?.parse()?,
        });
    }
    Ok(rows)
}
