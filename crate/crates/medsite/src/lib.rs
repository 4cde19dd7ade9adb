//! Siting of second-level temporary storage & disposal centers for a
//! medical-waste reverse-logistics network.
//!
//! The library models a city-scale inventory of waste collection sites
//! (large hospitals and small commons), partitions commons by coverage of
//! the large sites, and selects centers with a three-layer hierarchical
//! method: a 0-1 siting solve over the large sites, a capacitated siting
//! solve over the uncovered commons, and a seeded K-means sweep for whatever
//! remains. Plans can be audited, compared against the no-consolidation
//! baseline, serialized canonically, and rendered as SVG.
//!
//! Start with [`pipeline::run_pipeline`], or see the runnable programs under
//! `examples/`:
//!
//! ```bash
//! cargo run -p medsite --example generate_sites
//! cargo run -p medsite --example solve_pipeline
//! cargo run -p medsite --example exact_vs_greedy
//! cargo run -p medsite --example elbow_clustering
//! cargo run -p medsite --example evaluate_plan
//! cargo run -p medsite --example plot_plan
//! ```
//!
//! The same functionality is exposed by the thin `medsite` binary
//! (`gen`, `solve`, `validate`, `eval`, `plot` subcommands).

// `!(a > b)` style checks are deliberate: they reject NaN along with the
// out-of-range values, which `a <= b` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cluster;
pub mod coverage;
pub mod domain;
pub mod error;
pub mod evaluate;
pub mod gen;
pub mod geo;
pub mod io;
pub mod pipeline;
pub mod plot;
pub mod solver;

pub use error::{Error, Result};
