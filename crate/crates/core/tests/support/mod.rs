//! Independent reference computations for integration and acceptance
//! tests. Nothing here calls the library's own exact oracles.
#![allow(dead_code)]

use rand::Rng;
use trifree::graph::{Edge, Graph};
use trifree::rng::seeded_rng;

/// Edges with at least one endpoint of degree at most `t`.
pub fn m_prime(graph: &Graph, t: usize) -> usize {
    graph
        .edges()
        .filter(|&(u, v)| graph.degree(u) <= t || graph.degree(v) <= t)
        .count()
}

/// Triangles by checking every vertex triple.
pub fn triangles_by_triples(graph: &Graph) -> Vec<[usize; 3]> {
    let n = graph.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !graph.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if graph.has_edge(a, c) && graph.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Degeneracy as the largest minimum degree over induced subgraphs.
/// Exponential in `n`.
pub fn degeneracy_by_subsets(graph: &Graph) -> usize {
    let n = graph.n();
    assert!(n <= 16);
    let mut best = 0;
    for set in 1u32..(1 << n) {
        let min_deg = (0..n)
            .filter(|&v| set >> v & 1 == 1)
            .map(|v| graph.neighbors(v).iter().filter(|&&u| set >> u & 1 == 1).count())
            .min()
            .unwrap_or(0);
        best = best.max(min_deg);
    }
    best
}

/// Smallest number of edge deletions that leaves no triangle, by exhaustive
/// search over edge subsets.
pub fn deletion_distance(graph: &Graph) -> usize {
    let edges: Vec<Edge> = graph.edges().collect();
    assert!(edges.len() <= 24, "exhaustive search over {} edges", edges.len());
    let bit = |u: usize, v: usize| -> u32 {
        let key = (u.min(v), u.max(v));
        1 << edges.iter().position(|&e| e == key).expect("edge exists")
    };
    let triangle_masks: Vec<u32> = triangles_by_triples(graph)
        .into_iter()
        .map(|[a, b, c]| bit(a, b) | bit(a, c) | bit(b, c))
        .collect();
    if triangle_masks.is_empty() {
        return 0;
    }
    let full: u32 = if edges.len() == 32 {
        u32::MAX
    } else {
        (1 << edges.len()) - 1
    };
    let mut kept_best = 0;
    let mut kept = full;
    loop {
        let count = kept.count_ones();
        if count > kept_best && triangle_masks.iter().all(|&t| kept & t != t) {
            kept_best = count;
        }
        if kept == 0 {
            break;
        }
        kept = (kept - 1) & full;
    }
    edges.len() - kept_best as usize
}

/// Erdős–Rényi graph.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// All labeled graphs on `n` vertices, indexed by edge bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::from_edges(n, edges).unwrap()
    })
}

pub fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Standard deviation of a binomial proportion.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
