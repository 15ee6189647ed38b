//! Doubling search for the effective arboricity `Γ*`.
//!
//! Starting from `Γ = 1`, each round estimates `|E(H(G, t))|` at
//! `t = ⌈Γ/(24ε)⌉` with accuracy `ε/24` and stops as soon as the estimate
//! exceeds `(1 - ε/12)·m`; otherwise `Γ` doubles.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimator::{estimate_edges, EstimatorConfig};
use crate::graph::{GraphParams, Oracle, QueryLedger};
use crate::rng::derive_seed;
use crate::subgraph::Threshold;

/// Divisor linking `Γ` to the probe threshold: `t = ⌈Γ/(24ε)⌉`.
pub const THRESHOLD_DIVISOR: f64 = 24.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeIteration {
    pub gamma: u64,
    pub t: Threshold,
    pub estimate: f64,
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub gamma_star: u64,
    pub iterations: usize,
    pub per_iteration: Vec<ProbeIteration>,
    /// True when every iteration doubled and the last `Γ` was returned by default.
    pub exhausted: bool,
    pub queries_used: QueryLedger,
}

impl ProbeResult {
    /// The threshold validated for `gamma_star`.
    pub fn threshold(&self, eps: f64) -> Threshold {
        probe_threshold(self.gamma_star, eps)
    }
}

pub fn probe_threshold(gamma: u64, eps: f64) -> Threshold {
    Threshold::ceil_of(gamma as f64 / (THRESHOLD_DIVISOR * eps))
}

/// Number of doubling rounds: at least `⌈log₂ n⌉` (and at least 1), extended
/// until the threshold reaches `n - 1`, where `H(G, t) = G`.
pub fn iteration_bound(n: usize, eps: f64) -> usize {
    let log_n = (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize;
    let mut bound = log_n.max(1);
    while probe_threshold(1u64 << (bound - 1), eps).get() < n.saturating_sub(1) {
        bound += 1;
    }
    bound
}

pub fn probe_gamma_star(oracle: &mut Oracle<'_>, params: &GraphParams, seed: u64) -> Result<ProbeResult> {
    let before = oracle.ledger();
    if params.m == 0 {
        return Ok(ProbeResult {
            gamma_star: 1,
            iterations: 0,
            per_iteration: Vec::new(),
            exhausted: false,
            queries_used: QueryLedger::default(),
        });
    }
    let eps = params.eps;
    let bound = iteration_bound(params.n, eps);
    let fail_prob = 1.0 / (6.0 * bound as f64);
    let bar = (1.0 - eps / 12.0) * params.m as f64;

    let mut per_iteration = Vec::with_capacity(bound);
    let mut gamma = 1u64;
    for i in 0..bound {
        let t = probe_threshold(gamma, eps);
        let config = EstimatorConfig::new(eps / 24.0, t, fail_prob, params.n, params.m)?;
        let est = estimate_edges(oracle, &config, derive_seed(seed, i as u64))?;
        per_iteration.push(ProbeIteration {
            gamma,
            t,
            estimate: est.value,
            samples: est.samples_used,
        });
        if est.value > bar {
            return Ok(ProbeResult {
                gamma_star: gamma,
                iterations: i + 1,
                per_iteration,
                exhausted: false,
                queries_used: oracle.ledger().since(&before),
            });
        }
        if i + 1 < bound {
            gamma *= 2;
        }
    }
    Ok(ProbeResult {
        gamma_star: gamma,
        iterations: bound,
        per_iteration,
        exhausted: true,
        queries_used: oracle.ledger().since(&before),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;
    use crate::subgraph::edges_of_h;

    #[test]
    fn bound_covers_log_n_and_full_threshold() {
        assert_eq!(iteration_bound(1, 1.0), 1);
        assert_eq!(iteration_bound(2, 1.0), 1);
        // K3 at eps = 1 needs t = 2, first reached at Γ = 32 (round 6).
        assert_eq!(iteration_bound(3, 1.0), 6);
        // n = 3000: ⌈log₂ n⌉ = 12, and t(2^11) = ⌈2048/6⌉ = 342 < 2999.
        let b = iteration_bound(3000, 0.25);
        assert!(probe_threshold(1 << (b - 1), 0.25).get() >= 2999);
        assert!(probe_threshold(1 << (b - 2), 0.25).get() < 2999);
    }

    /// The doubling schedule with each estimate replaced by its expectation `m'`.
    fn expected_trace(g: &Graph, eps: f64) -> u64 {
        let bar = (1.0 - eps / 12.0) * g.m() as f64;
        let mut gamma = 1;
        for _ in 0..iteration_bound(g.n(), eps) {
            if edges_of_h(g, probe_threshold(gamma, eps)) as f64 > bar {
                return gamma;
            }
            gamma *= 2;
        }
        panic!("schedule exhausted");
    }

    #[test]
    fn triangle_at_eps_one() {
        let g = triangle();
        assert_eq!(expected_trace(&g, 1.0), 32);
        let params = GraphParams::for_graph(&g, 1.0).unwrap();
        for seed in 0..5 {
            let res = probe_gamma_star(&mut Oracle::new(&g), &params, seed).unwrap();
            assert_eq!(res.gamma_star, 32);
            assert_eq!(res.iterations, 6);
            assert!(!res.exhausted);
            assert_eq!(res.threshold(1.0).get(), 2);
            let ts: Vec<usize> = res.per_iteration.iter().map(|it| it.t.get()).collect();
            assert_eq!(ts, [1, 1, 1, 1, 1, 2]);
            // Below t = 2 every vertex is heavy and the estimate is exactly 0.
            assert!(res.per_iteration[..5].iter().all(|it| it.estimate == 0.0));
        }
    }

    #[test]
    fn path_retains_edges() {
        let g = path(40);
        let eps = 0.5;
        let params = GraphParams::for_graph(&g, eps).unwrap();
        let mut good = 0;
        let runs = 30;
        for seed in 0..runs {
            let res = probe_gamma_star(&mut Oracle::new(&g), &params, seed).unwrap();
            assert!(res.gamma_star.is_power_of_two());
            assert_eq!(res.gamma_star, 1 << (res.iterations - 1));
            let kept = edges_of_h(&g, res.threshold(eps)) as f64;
            if kept >= (1.0 - eps / 6.0) * g.m() as f64 {
                good += 1;
            }
        }
        assert!(good * 6 >= runs * 5, "{good}/{runs}");
    }

    #[test]
    fn edgeless_graph_is_trivial() {
        let g = Graph::empty(5);
        let params = GraphParams::for_graph(&g, 0.5).unwrap();
        let res = probe_gamma_star(&mut Oracle::new(&g), &params, 0).unwrap();
        assert_eq!(res.gamma_star, 1);
        assert_eq!(res.queries_used.total(), 0);
    }

    #[test]
    fn cost_is_dominated_by_last_iteration() {
        let g = complete(8).disjoint_union(&star(12)).disjoint_union(&cycle(20));
        let params = GraphParams::for_graph(&g, 0.5).unwrap();
        let res = probe_gamma_star(&mut Oracle::new(&g), &params, 3).unwrap();
        let last = res.per_iteration.last().unwrap().samples;
        assert!(res.queries_used.total() <= 4 * 4 * last);
    }
}
