//! Benchmark harness for the network-inference toolkit: sweep
//! configuration, deterministic seeded execution, and plot-ready
//! aggregation of the results.

pub mod config;
pub mod figures;
pub mod runner;

pub use config::ExperimentConfig;
pub use figures::{aggregate_figures, FigureTables};
pub use runner::{cell_seed, read_csv, run_experiment, write_csv, ResultRow, RunRecord};
