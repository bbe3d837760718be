//! Reverse engineering of gene regulatory networks from temporal
//! expression profiles.
//!
//! The crate covers the full synthetic benchmark pipeline:
//!
//! * [`netgen`] — directed ground-truth topologies (ER, BA, WS) with a
//!   shared average in-degree knob, plus degree statistics and an edge-list
//!   text format;
//! * [`pgn`] — a probabilistic Boolean network simulator producing binary
//!   expression matrices;
//! * [`criterion`] — mean conditional entropy of a target given candidate
//!   predictors, and intrinsically multivariate prediction scores;
//! * [`search`] — SFS, SFFS and the scale-free-prior scheduled search for
//!   whole-network inference;
//! * [`metrics`] — PPV / sensitivity / similarity scoring against ground
//!   truth.
//!
//! The whole pipeline in one breath:
//!
//! ```
//! use grn_core::metrics::score;
//! use grn_core::netgen::generate_ba;
//! use grn_core::pgn::build_transition_model;
//! use grn_core::search::{network_inference, SearchConfig};
//!
//! let net = generate_ba(20, 2.0, 7)?;
//! let model = build_transition_model(&net, 0.98, 0.01, 0.01, 8)?;
//! let exps = model.simulate(60, 9)?;
//! let targets: Vec<usize> = (0..net.n()).collect();
//! let inferred = network_inference(&targets, &exps, &SearchConfig::default())?;
//! let report = score(&net, &inferred)?;
//! assert!(report.similarity > 0.0 && report.similarity <= 1.0);
//! # Ok::<(), grn_core::Error>(())
//! ```

pub mod criterion;
pub mod error;
pub mod expression;
pub mod metrics;
pub mod netgen;
pub mod pgn;
pub mod search;

pub use error::{Error, Result};
pub use expression::ExpressionMatrix;
pub use netgen::{degree_histogram, DegreeHistogram, DirectedGeneNetwork, Topology};
pub use pgn::{build_transition_model, NetworkState, TransitionModel};
pub use search::{InferredNetwork, Method, SearchConfig};
