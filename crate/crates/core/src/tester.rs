//! One-sided-error tester for triangle freeness.
//!
//! The tester probes `Γ*`, fixes a threshold `t`, then for `⌈18/ε⌉` rounds
//! samples an edge of `H(G, t)`; when both endpoints are light it reads
//! both neighborhoods (at most `2t` neighbor queries) and rejects on a common
//! neighbor. A rejection always carries a triangle checked with three pair
//! queries, so triangle-free graphs are accepted on every seed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphParams, Oracle, QueryLedger, Vertex};
use crate::probe::{probe_gamma_star, probe_threshold};
use crate::rng::{derive_seed, seeded_rng};
use crate::sampler::{default_timeout, sample_edge};
use crate::subgraph::Threshold;

/// Rounds are `⌈ROUNDS_FACTOR/ε⌉`.
pub const ROUNDS_FACTOR: f64 = 18.0;

/// How the tester turns `Γ*` into a threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    /// `⌈Γ*/(24ε)⌉`, the threshold at which the probe certified retention.
    #[default]
    Validated,
    /// `⌈Γ*/ε⌉`.
    Paper,
}

impl ThresholdMode {
    pub fn threshold(self, gamma_star: u64, eps: f64) -> Threshold {
        match self {
            Self::Validated => probe_threshold(gamma_star, eps),
            Self::Paper => Threshold::ceil_of(gamma_star as f64 / eps),
        }
    }
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Validated => "validated",
            Self::Paper => "paper",
        })
    }
}

impl FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "validated" => Ok(Self::Validated),
            "paper" => Ok(Self::Paper),
            other => Err(Error::InvalidParameter(format!(
                "threshold mode must be \"validated\" or \"paper\", got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Accept,
    Reject,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Accept => "ACCEPT",
            Self::Reject => "REJECT",
        })
    }
}

/// Queries split by tester phase; the fields sum to the run's total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseQueries {
    pub probe: QueryLedger,
    /// Sampler attempts plus the degree query classifying the second endpoint.
    pub sampling: QueryLedger,
    pub intersection: QueryLedger,
    pub validation: QueryLedger,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    /// A triangle, ascending, present exactly when the decision is REJECT.
    pub witness: Option<[Vertex; 3]>,
    pub rounds_run: usize,
    pub gamma_star: u64,
    pub threshold: Threshold,
    pub probe_exhausted: bool,
    pub sampler_timeouts: usize,
    pub total_queries: QueryLedger,
    pub phases: PhaseQueries,
    pub seed: u64,
}

pub fn rounds(eps: f64) -> usize {
    (ROUNDS_FACTOR / eps).ceil() as usize
}

/// Runs the tester with the validated threshold.
pub fn test_triangle_freeness(oracle: &mut Oracle<'_>, params: &GraphParams, seed: u64) -> Result<Verdict> {
    test_triangle_freeness_with(oracle, params, seed, ThresholdMode::Validated)
}

pub fn test_triangle_freeness_with(
    oracle: &mut Oracle<'_>,
    params: &GraphParams,
    seed: u64,
    mode: ThresholdMode,
) -> Result<Verdict> {
    if params.n != oracle.n() {
        return Err(Error::InvalidParameter(format!(
            "params have n = {} but the oracle graph has {} vertices",
            params.n,
            oracle.n()
        )));
    }
    let start = oracle.ledger();
    let probe = probe_gamma_star(oracle, params, derive_seed(seed, 0))?;
    let t = mode.threshold(probe.gamma_star, params.eps);
    let mut phases = PhaseQueries {
        probe: probe.queries_used,
        ..PhaseQueries::default()
    };
    let mut verdict = Verdict {
        decision: Decision::Accept,
        witness: None,
        rounds_run: 0,
        gamma_star: probe.gamma_star,
        threshold: t,
        probe_exhausted: probe.exhausted,
        sampler_timeouts: 0,
        total_queries: QueryLedger::default(),
        phases,
        seed,
    };
    if params.m == 0 {
        verdict.total_queries = oracle.ledger().since(&start);
        return Ok(verdict);
    }

    let timeout = default_timeout(t, params);
    let mut rng = seeded_rng(derive_seed(seed, 1));
    for round in 1..=rounds(params.eps) {
        verdict.rounds_run = round;
        let mark = oracle.ledger();
        let sample = sample_edge(oracle, t, timeout, &mut rng)?;
        let Some(edge) = sample.edge else {
            verdict.sampler_timeouts += 1;
            phases.sampling += oracle.ledger().since(&mark);
            continue;
        };
        let (u, v) = (edge.light, edge.other);
        let other_heavy = t.is_heavy(oracle.degree(v)?);
        phases.sampling += oracle.ledger().since(&mark);
        if other_heavy {
            continue;
        }

        let mark = oracle.ledger();
        let common = intersect_neighborhoods(oracle, u, v, t)?;
        phases.intersection += oracle.ledger().since(&mark);
        let Some(w) = common else { continue };

        let mark = oracle.ledger();
        let valid = oracle.pair(u, v)? && oracle.pair(u, w)? && oracle.pair(v, w)?;
        phases.validation += oracle.ledger().since(&mark);
        if valid {
            let mut triangle = [u, v, w];
            triangle.sort_unstable();
            verdict.decision = Decision::Reject;
            verdict.witness = Some(triangle);
            break;
        }
    }
    verdict.phases = phases;
    verdict.total_queries = oracle.ledger().since(&start);
    Ok(verdict)
}

/// Smallest common neighbor of two light vertices, found by reading both
/// neighbor lists in full (two degree queries, `deg(u) + deg(v)` neighbor
/// queries).
pub fn intersect_neighborhoods(oracle: &mut Oracle<'_>, u: Vertex, v: Vertex, t: Threshold) -> Result<Option<Vertex>> {
    let read = |oracle: &mut Oracle<'_>, x: Vertex| -> Result<Vec<Vertex>> {
        let degree = oracle.degree(x)?;
        if t.is_heavy(degree) {
            return Err(Error::Contract(format!(
                "vertex {x} has degree {degree} > t = {t}; only light neighborhoods are read"
            )));
        }
        (1..=degree).map(|i| oracle.neighbor(x, i)).collect()
    };
    let nu = read(oracle, u)?;
    let nv = read(oracle, v)?;
    let (mut i, mut j) = (0, 0);
    while i < nu.len() && j < nv.len() {
        match nu[i].cmp(&nv[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Ok(Some(nu[i])),
        }
    }
    Ok(None)
}
