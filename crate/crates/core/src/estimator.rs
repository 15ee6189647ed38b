//! Monte-Carlo estimate of `m' = |E(H(G, t))|`.
//!
//! Each sample draws a uniform vertex `v` and a uniform neighbor `u`, and
//! scores `deg(v)/t` when `v → u` is an edge of `D(G, t)` and 0 otherwise
//! (heavy and isolated vertices always score 0). Scores lie in `[0, 1]` and
//! `t·n` times their mean is an unbiased estimate of `m'`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Oracle, QueryLedger};
use crate::rng::seeded_rng;
use crate::subgraph::{ceil_tolerant, orientation, Threshold};

/// Leading constant of [`sample_size`].
pub const SAMPLE_CONSTANT: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub eps: f64,
    pub t: Threshold,
    pub fail_prob: f64,
    pub n: usize,
    pub m: usize,
}

impl EstimatorConfig {
    pub fn new(eps: f64, t: Threshold, fail_prob: f64, n: usize, m: usize) -> Result<Self> {
        let config = Self {
            eps,
            t,
            fail_prob,
            n,
            m,
        };
        config.sample_size()?;
        Ok(config)
    }

    pub fn sample_size(&self) -> Result<u64> {
        sample_size(self.eps, self.t, self.n, self.m, self.fail_prob)
    }
}

/// `r = ⌈16 · ln(2/fail_prob) · eps⁻² · t / (m/n)⌉`.
///
/// By the multiplicative Chernoff bound with deviation `eps`, this many
/// `[0, 1]`-valued samples keep the relative error of their mean below
/// `eps` with probability at least `1 - fail_prob` whenever the mean is at
/// least `(m/n)/(4t)`, which holds once `m' >= m/4`.
pub fn sample_size(eps: f64, t: Threshold, n: usize, m: usize, fail_prob: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !(fail_prob > 0.0 && fail_prob < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fail_prob must lie in (0, 1), got {fail_prob}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if m == 0 {
        return Err(Error::UndefinedDensity);
    }
    let density = m as f64 / n as f64;
    let r = SAMPLE_CONSTANT * (2.0 / fail_prob).ln() * t.get() as f64 / (eps * eps * density);
    Ok((ceil_tolerant(r) as u64).max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeCountEstimate {
    pub value: f64,
    pub samples_used: u64,
    pub queries_used: QueryLedger,
    pub seed: u64,
}

/// Runs the estimator with a fresh generator seeded by `seed`.
pub fn estimate_edges(oracle: &mut Oracle<'_>, config: &EstimatorConfig, seed: u64) -> Result<EdgeCountEstimate> {
    if config.n != oracle.n() {
        return Err(Error::InvalidParameter(format!(
            "config has n = {} but the oracle graph has {} vertices",
            config.n,
            oracle.n()
        )));
    }
    let r = config.sample_size()?;
    let mut rng = seeded_rng(seed);
    let before = oracle.ledger();
    let t = config.t;
    // Σ deg(v_i)·Y_i; each X_i is this term divided by t.
    let mut weighted_hits: u64 = 0;
    for _ in 0..r {
        let v = rng.random_range(0..config.n);
        let deg_v = oracle.degree(v)?;
        if deg_v == 0 || t.is_heavy(deg_v) {
            continue;
        }
        let u = oracle.neighbor(v, rng.random_range(1..=deg_v))?;
        let deg_u = oracle.degree(u)?;
        if orientation(v, deg_v, u, deg_u, t).is_some_and(|e| e.from == v) {
            weighted_hits += deg_v as u64;
        }
    }
    // (t·n/r) · Σ X_i = n · Σ deg(v_i)·Y_i / r
    let value = config.n as f64 * weighted_hits as f64 / r as f64;
    Ok(EdgeCountEstimate {
        value,
        samples_used: r,
        queries_used: oracle.ledger().since(&before),
        seed,
    })
}
