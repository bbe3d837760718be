//! Discrete gene expression matrices observed over time.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{format_err, parameter, Result};

/// A gene-by-time matrix of binary expression values.
///
/// Row `g` holds the trajectory of gene `g`; column `t` is the network state
/// at time instant `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressionMatrix {
    values: Vec<u8>,
    n_genes: usize,
    n_times: usize,
    seed: u64,
}

impl ExpressionMatrix {
    /// Builds a matrix from per-gene rows, validating the binary alphabet
    /// and consistent dimensions.
    pub fn from_rows(rows: Vec<Vec<u8>>, seed: u64) -> Result<Self> {
        let n_genes = rows.len();
        if n_genes == 0 {
            return Err(parameter("expression matrix needs at least one gene"));
        }
        let n_times = rows[0].len();
        if n_times == 0 {
            return Err(parameter("expression matrix needs at least one time point"));
        }
        let mut values = Vec::with_capacity(n_genes * n_times);
        for (g, row) in rows.iter().enumerate() {
            if row.len() != n_times {
                return Err(parameter(format!(
                    "row {g} has {} columns, expected {n_times}",
                    row.len()
                )));
            }
            for &v in row {
                if v > 1 {
                    return Err(parameter(format!("value {v} outside alphabet {{0,1}}")));
                }
                values.push(v);
            }
        }
        Ok(Self {
            values,
            n_genes,
            n_times,
            seed,
        })
    }

    pub(crate) fn from_flat(values: Vec<u8>, n_genes: usize, n_times: usize, seed: u64) -> Self {
        debug_assert_eq!(values.len(), n_genes * n_times);
        Self {
            values,
            n_genes,
            n_times,
            seed,
        }
    }

    pub fn n_genes(&self) -> usize {
        self.n_genes
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn value(&self, gene: usize, time: usize) -> u8 {
        self.values[gene * self.n_times + time]
    }

    pub fn row(&self, gene: usize) -> &[u8] {
        &self.values[gene * self.n_times..(gene + 1) * self.n_times]
    }

    /// Order-sensitive FNV-1a checksum over dimensions and cell values,
    /// used to assert that consumers saw the exact same data.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |b: u64| {
            for byte in b.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.n_genes as u64);
        eat(self.n_times as u64);
        for &v in &self.values {
            h ^= v as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }

    /// Writes the matrix as tab-separated text: a header line
    /// `# n=<N> T=<T> seed=<SEED>` followed by one gene per row.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# n={} T={} seed={}", self.n_genes, self.n_times, self.seed)?;
        let mut line = String::with_capacity(2 * self.n_times);
        for g in 0..self.n_genes {
            line.clear();
            for (t, &v) in self.row(g).iter().enumerate() {
                if t > 0 {
                    line.push('\t');
                }
                line.push(if v == 0 { '0' } else { '1' });
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// Reads a matrix written by [`Self::write_to`]; round-trips bit-exactly.
    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header = lines
            .next()
            .ok_or_else(|| format_err("empty expression matrix file"))??;
        let (n, t, seed) = parse_matrix_header(&header)?;
        let mut values = Vec::with_capacity(n * t);
        let mut rows = 0usize;
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut cols = 0usize;
            for field in line.split('\t') {
                let v = match field {
                    "0" => 0,
                    "1" => 1,
                    other => {
                        return Err(format_err(format!("bad expression value `{other}`")))
                    }
                };
                values.push(v);
                cols += 1;
            }
            if cols != t {
                return Err(format_err(format!("row {rows} has {cols} columns, expected {t}")));
            }
            rows += 1;
        }
        if rows != n {
            return Err(format_err(format!("{rows} rows read, header says {n}")));
        }
        Ok(Self::from_flat(values, n, t, seed))
    }

    pub fn to_string_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("matrix text is ASCII")
    }
}

fn parse_matrix_header(header: &str) -> Result<(usize, usize, u64)> {
    let body = header
        .strip_prefix("# ")
        .ok_or_else(|| format_err(format!("bad header `{header}`")))?;
    let mut n = None;
    let mut t = None;
    let mut seed = None;
    for part in body.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format_err(format!("bad header field `{part}`")))?;
        match key {
            "n" => n = Some(value.parse().map_err(|_| format_err("bad n in header"))?),
            "T" => t = Some(value.parse().map_err(|_| format_err("bad T in header"))?),
            "seed" => seed = Some(value.parse().map_err(|_| format_err("bad seed in header"))?),
            other => return Err(format_err(format!("unknown header key `{other}`"))),
        }
    }
    match (n, t, seed) {
        (Some(n), Some(t), Some(seed)) => Ok((n, t, seed)),
        _ => Err(format_err(format!("incomplete header `{header}`"))),
    }
}
