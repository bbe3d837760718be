//! Plot-ready aggregate tables derived from the raw result rows: learning
//! curves over signal size, their distribution summaries, and degradation
//! curves over average degree.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Result};

use grn_core::metrics::aggregate_values;
use grn_core::{Method, Topology};

use crate::runner::ResultRow;

/// Mean similarity per (topology, method, signal size), averaged over
/// average degrees and runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMeanRow {
    pub topology: Topology,
    pub method: Method,
    pub signal_size: usize,
    pub mean_similarity: f64,
}

/// Distribution summary of the similarity values per
/// (topology, method, signal size).
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBoxRow {
    pub topology: Topology,
    pub method: Method,
    pub signal_size: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Mean similarity per (topology, method, average degree), averaged over
/// signal sizes and runs.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMeanRow {
    pub topology: Topology,
    pub method: Method,
    pub avg_k: f64,
    pub mean_similarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTables {
    pub signal_means: Vec<SignalMeanRow>,
    pub signal_boxstats: Vec<SignalBoxRow>,
    pub degree_means: Vec<DegreeMeanRow>,
}

/// Groups raw rows into the three aggregate tables.
pub fn aggregate_figures(rows: &[ResultRow]) -> Result<FigureTables> {
    if rows.is_empty() {
        bail!("no result rows to aggregate");
    }
    let mut by_signal: BTreeMap<(Topology, Method, usize), Vec<f64>> = BTreeMap::new();
    let mut by_degree: BTreeMap<(Topology, Method, u64), Vec<f64>> = BTreeMap::new();
    for r in rows {
        by_signal
            .entry((r.topology, r.method, r.signal_size))
            .or_default()
            .push(r.similarity);
        by_degree
            .entry((r.topology, r.method, r.avg_k.to_bits()))
            .or_default()
            .push(r.similarity);
    }
    let mut signal_means = Vec::with_capacity(by_signal.len());
    let mut signal_boxstats = Vec::with_capacity(by_signal.len());
    for (&(topology, method, signal_size), values) in &by_signal {
        let stats = aggregate_values(values)?;
        signal_means.push(SignalMeanRow {
            topology,
            method,
            signal_size,
            mean_similarity: stats.mean,
        });
        signal_boxstats.push(SignalBoxRow {
            topology,
            method,
            signal_size,
            min: stats.min,
            q1: stats.q1,
            median: stats.median,
            q3: stats.q3,
            max: stats.max,
        });
    }
    let mut degree_means = Vec::with_capacity(by_degree.len());
    for (&(topology, method, avg_k_bits), values) in &by_degree {
        let stats = aggregate_values(values)?;
        degree_means.push(DegreeMeanRow {
            topology,
            method,
            avg_k: f64::from_bits(avg_k_bits),
            mean_similarity: stats.mean,
        });
    }
    Ok(FigureTables {
        signal_means,
        signal_boxstats,
        degree_means,
    })
}

pub fn write_signal_means<W: Write>(rows: &[SignalMeanRow], mut w: W) -> Result<()> {
    writeln!(w, "topology,method,signal_size,mean_similarity")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.6}",
            r.topology, r.method, r.signal_size, r.mean_similarity
        )?;
    }
    Ok(())
}

pub fn write_signal_boxstats<W: Write>(rows: &[SignalBoxRow], mut w: W) -> Result<()> {
    writeln!(w, "topology,method,signal_size,min,q1,median,q3,max")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.topology, r.method, r.signal_size, r.min, r.q1, r.median, r.q3, r.max
        )?;
    }
    Ok(())
}

pub fn write_degree_means<W: Write>(rows: &[DegreeMeanRow], mut w: W) -> Result<()> {
    writeln!(w, "topology,method,avg_k,mean_similarity")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.6}",
            r.topology, r.method, r.avg_k, r.mean_similarity
        )?;
    }
    Ok(())
}
