//! Rejection sampler for edges of `H(G, t)`.
//!
//! One attempt picks a uniform vertex `v` and a uniform `j ∈ [1, t]` and
//! succeeds when `v` is light and has a `j`-th neighbor. A light–light edge
//! can be hit from both ends and a light–heavy edge from one, so conditioned
//! on success every edge of `H(G, t)` has probability within a factor 2 of
//! any other.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, GraphParams, Oracle, Vertex};
use crate::subgraph::Threshold;

/// Multiplier `c` in the default timeout `⌈c·t/d̄⌉`.
pub const TIMEOUT_FACTOR: f64 = 40.0;

/// A sampled edge. `light` is the endpoint the sampler picked, known to be
/// light; `other` may be either.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledEdge {
    pub light: Vertex,
    pub other: Vertex,
}

impl SampledEdge {
    pub fn normalized(&self) -> Edge {
        (self.light.min(self.other), self.light.max(self.other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSample {
    /// `None` when the attempt budget ran out.
    pub edge: Option<SampledEdge>,
    pub attempts: u64,
}

impl EdgeSample {
    pub fn timed_out(&self) -> bool {
        self.edge.is_none()
    }
}

/// `⌈40·t/d̄⌉` with `d̄ = 2m/n`, at least 1.
pub fn default_timeout(t: Threshold, params: &GraphParams) -> u64 {
    if params.m == 0 {
        return 1;
    }
    let attempts = TIMEOUT_FACTOR * t.get() as f64 / params.avg_degree();
    (attempts.ceil() as u64).max(1)
}

pub fn sample_edge<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    t: Threshold,
    timeout_attempts: u64,
    rng: &mut R,
) -> Result<EdgeSample> {
    if timeout_attempts == 0 {
        return Err(Error::InvalidParameter(
            "timeout must allow at least one attempt".into(),
        ));
    }
    let n = oracle.n();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    for attempt in 1..=timeout_attempts {
        let v = rng.random_range(0..n);
        let j = rng.random_range(1..=t.get());
        let degree = oracle.degree(v)?;
        if !t.is_heavy(degree) && j <= degree {
            let u = oracle.neighbor(v, j)?;
            return Ok(EdgeSample {
                edge: Some(SampledEdge { light: v, other: u }),
                attempts: attempt,
            });
        }
    }
    Ok(EdgeSample {
        edge: None,
        attempts: timeout_attempts,
    })
}
