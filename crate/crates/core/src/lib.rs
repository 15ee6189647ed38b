//! Sublinear one-sided-error testing of triangle freeness in the general
//! graph model.
//!
//! Algorithms see the input only through an [`Oracle`](graph::Oracle),
//! which answers degree, neighbor and vertex-pair queries and counts each
//! kind. The tester ([`tester`]) combines an effective-arboricity probe
//! ([`probe`]), built on an edge-count estimator ([`estimator`]), with an
//! almost-uniform edge sampler ([`sampler`]). [`exact`] and [`generators`]
//! provide ground truth and certified instances; [`bench`] runs seeded
//! experiment grids.

pub mod bench;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod probe;
pub mod rng;
pub mod sampler;
pub mod subgraph;
pub mod tester;

pub use error::{Error, Result};
pub use graph::{Graph, GraphParams, Oracle, QueryLedger};
pub use subgraph::Threshold;
pub use tester::{test_triangle_freeness, Decision, ThresholdMode, Verdict};
